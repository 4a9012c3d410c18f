"""Random small specifications, rendered as DSL text."""

from __future__ import annotations

from hypothesis import strategies as st


@st.composite
def spec_texts(draw, max_params: int = 3, max_categories: int = 2, max_choices: int = 3, specials: bool = True) -> str:
    """Integer-only specs with optional properties, selectors and special choices.

    Selectors only mention properties declared by earlier categories, which
    keeps most draws satisfiable without hiding the interesting interactions.
    """
    n_params = draw(st.integers(2, max_params))
    lines = ["Specification: Random"]
    declared: list[str] = []
    for p in range(n_params):
        var = f"v{p}"
        lines.append(f"Parameter({100 + p}): {var} of type Integer")
        for c in range(1, draw(st.integers(1, max_categories)) + 1):
            lines.append(f"  Category {c} - cat {p}.{c}")
            n_choices = draw(st.integers(2, max_choices))
            base = draw(st.integers(1, n_choices))
            cuts = sorted(draw(st.lists(st.integers(-20, 20), min_size=n_choices - 1, max_size=n_choices - 1, unique=True)))
            new_props: list[str] = []
            for k in range(1, n_choices + 1):
                lo = cuts[k - 2] if k > 1 else None
                hi = cuts[k - 1] if k < n_choices else None
                parts = ([f"{var} > {lo}"] if lo is not None else []) + ([f"{var} <= {hi}"] if hi is not None else [])
                lines.append(f"    {'*' if k == base else ''}Ch {c}.{k}: choice {k}")
                lines.append("      " + (" && ".join(parts) or "true"))
                annots = []
                if declared and k != base and draw(st.booleans()):
                    prop = draw(st.sampled_from(declared))
                    annots.append(f"[if {'!' if draw(st.booleans()) else ''}{prop}]")
                if specials and k != base:
                    kind = draw(st.sampled_from(["", "", "", "[error]", "[single]"]))
                    if kind:
                        annots.append(kind)
                if draw(st.booleans()):
                    prop = f"p{p}_{c}_{k}"
                    new_props.append(prop)
                    annots.append(f"[properties {prop}]")
                if annots:
                    lines.append("      " + "".join(annots))
            declared.extend(new_props)
    return "\n".join(lines) + "\n"
