"""Finite k-linear categories over F_p, their representations, and checks of
``gen``/``cogen`` membership, faithful balance and the symmetry principle."""

from . import exactla
from .adjunction import (
    chi,
    chi_inv,
    chi_witness,
    counit_varphi,
    phi_prime,
    psi_prime,
    triangle_check,
    unit_alpha,
    unit_alpha_prime,
)
from .corpus import (
    CorpusInstance,
    enumerate_basic_subcategories,
    get_instance,
    linear_quiver,
    random_module,
    semisimple,
    truncated_polynomial,
)
from .fincat import (
    AddCategory,
    FinCategory,
    QuiverSpec,
    Rep,
    RepMorphism,
    add_category,
    build_bound_quiver_category,
    coyoneda_injective,
    nat_transformations,
    phi,
    psi,
    rep_from_arrows,
    yoneda,
)
from .gencogen import (
    ApproximationChain,
    MembershipVerdict,
    cogen_characterized,
    cogen_definitional,
    evaluation_map,
    gen_characterized,
    gen_definitional,
    left_approximation,
    right_approximation,
)
from .homalg import ext_dim, ext_dims, free_resolution, tensor_over, tor_dim, tor_dims
from .theorems import (
    TheoremReport,
    faithfully_balanced,
    verify_cogen1_duality,
    verify_extyon,
    verify_iso_on_ext,
    verify_nice_special_case,
    verify_symmetry,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
