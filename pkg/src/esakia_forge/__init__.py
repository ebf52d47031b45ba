"""Finite step-by-step constructions of free Heyting algebras and their duals.

Posets are the finite duals; upsets are the algebra elements.  The main entry
points are :func:`build_complex` for the iterated step, :func:`upsets` for the
dual algebra, and the variety, universal-model and hyperspace helpers below.
"""
from .birkhoff import (UpsetLattice, Valuation, box, eval_formula, heyting_implication,
                       join_irreducibles, lattices_isomorphic, negation, refutation,
                       upsets, validates)
from .config import RunConfig, get_config, overridden, set_config
from .errors import *  # noqa: F401,F403
from .formulas import (GeneratedAlgebra, equivalent_on_frame, generate_subalgebra,
                       godel_chain_oracle)
from .inquisitive import (box_set, is_regularly_generated, m_complex, medvedev_frame,
                          regular_elements, vietoris_discrete, vmax_step)
from .modes import VarietyMode
from .poset import (FinitePoset, MonotoneMap, disjoint_union, free_dl_dual, hasse_edges,
                    is_isomorphic, is_p_morphism, monotone_maps, posets_up_to_iso,
                    product, pullback)
from .syntax import (And, Bot, Implies, Not, Or, Top, Var, implication_rank, parse,
                     to_text)
from .universal import (LazyComplex, bullet_embed, n_universal_model, stability_table,
                        universal_model)
from .varieties import (boolean_step, godel_coproduct, kc_filter_characterization,
                        lc_filter_characterization, lc_free, stabilization_check)
from .vietoris import (Complex, GContext, Layer, build_complex, codistributivity_check,
                       is_g_open_map, is_g_open_subset, lift_direct_image,
                       lift_point_map, product_complex, pullback_complex, unit_thread,
                       vietoris_step)

__version__ = "0.1.0"
