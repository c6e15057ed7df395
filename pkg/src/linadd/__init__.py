"""Linear additives: terms, types, derivation checking, cost-accounted
reduction, lazy cut elimination, inhabitant enumeration, and translation
into second-order multiplicative linear logic."""

__version__ = "0.1.0"

from .terms import (  # noqa: F401
    Term, Var, Abs, App, Pair, Proj, Copy,
    term_size, free_vars, alpha_equal, is_value, identity_term,
)
from .typesys import (  # noqa: F401
    Type, TVar, Lolli, With, Forall,
    type_size, unit_type, tensor_type, bool_type,
    is_closed, is_forall_lazy, is_lazy, is_pi1,
)
from .derivation import (  # noqa: F401
    Derivation, Judgement, Violation, CheckError,
    check, check_ok, metrics, is_cut_free,
)
from .reduce import normalize, push_reduction, beta_eta_equal  # noqa: F401
from .cutelim import eliminate, elim_step, ElimTrace  # noqa: F401
from .inhabit import enumerate_inhabitants, maximal_value, eta_expand  # noqa: F401
from .translate import GadgetLibrary, translate_derivation, translate_type  # noqa: F401
from .frontend import (  # noqa: F401
    parse_term, parse_type, parse_derivation,
    print_term, print_type, print_derivation,
)
