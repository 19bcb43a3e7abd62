from .synthetic import get_synt_collapse, get_synt_growth, get_synt_power_law
