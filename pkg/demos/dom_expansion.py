"""How much does element context inflate the tokens a ranking model reads?"""

# %%
from wattagent.tokenization import (
    FULL_CONTEXT,
    NO_CONTEXT,
    ContextPolicy,
    HeuristicCharCounter,
    cleaned_element_repr,
    dom_elements,
    dom_expansion_factor,
)

page = """<html><body>
<nav><a href="/">Home</a><a href="/deals">Deals</a><a href="/cart">Cart</a></nav>
<form id="search"><label>From</label><input name="from"><label>To</label><input name="to">
<button type="submit">Search flights</button></form>
<ul class="results"><li>Oslo 09:10</li><li>Oslo 12:45</li><li>Oslo 18:30</li></ul>
</body></html>"""

# %%
for e in dom_elements(page, FULL_CONTEXT)[:6]:
    print(f"{e.tag:7s} {cleaned_element_repr(e, FULL_CONTEXT)!r}")

# %% [markdown]
# Each element is described by its own markup, a short marker for its
# parent and up to five child markers.  Summed over all elements and divided
# by the page's token count this gives the expansion factor k.  Without any
# context the elements just partition the page, so k is exactly 1.

# %%
counter = HeuristicCharCounter()
for name, policy in [("no context", NO_CONTEXT), ("full context", FULL_CONTEXT),
                     ("parent only", ContextPolicy(include_children=False))]:
    est = dom_expansion_factor(page, counter, policy)
    print(f"{name:12s} k = {est.k_hat:.3f}  within [1, 3]: {est.within_paper_bounds}")

# %%
# a long parent text copied into twenty tiny children pushes k past 3;
# the estimate is flagged rather than clipped
wide = ContextPolicy(max_children=50, text_chars=500)
listing = "<ul>" + "Flights from Oslo this week " * 15 + "<li>x</li>" * 20 + "</ul>"
print(dom_expansion_factor(listing, counter, wide))
