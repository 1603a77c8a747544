"""Energy, CO2 and dedicated-metrics accounting for LLM web-agent pipelines."""

from .emissions import (
    CAR_G_PER_KM,
    EmissionsResult,
    EnergyMixTable,
    TrainingRunSpec,
    car_distance_equivalent,
    lookup_intensity,
    task_emissions,
    training_footprint,
)
from .energy_sources import (
    CostProxyInputs,
    ModelEnergyProfile,
    PowerTrace,
    cost_proxy_energy_per_token,
    integrate_power_trace,
    measured_energy_per_token,
    reported_profile,
)
from .errors import (
    ConfigurationError,
    ParseError,
    TransparencyError,
    UnknownRegionError,
    ValidationError,
    WattAgentError,
)
from .pipeline import (
    ActionEnergyEstimate,
    AgentPipeline,
    Stage,
    TaskProfile,
    TokensPerActionExpr,
    action_energy,
    load_pipeline,
    pipeline_from_dict,
    stage_tokens_per_action,
    task_energy,
)
from .quantities import Interval, convert_energy, convert_per_energy, interval_scale, interval_sum
from .reporting import (
    ComparisonReport,
    DedicatedMetricsBlock,
    compare_agents,
    dedicated_metrics,
    parse_report,
    render_report,
)
from .tokenization import CorpusStats, corpus_stats, count_tokens, dom_elements, dom_expansion_factor

__version__ = "0.1.0"
