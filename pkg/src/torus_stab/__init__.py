"""Exact computation of torsion cosets and power-map stable subvarieties of the algebraic torus."""
from .bounds import BoundReport, bounds, replay
from .coset import (
    OrbitCert,
    TorsionCoset,
    TorsionPoint,
    coset_contained_in,
    coset_defining_binomials,
    is_stable,
    orbit,
    power_image,
)
from .cyclo import CycNum, RootOfUnity, as_root_of_unity, certify_order_form, cyc_arith, order
from .errors import *  # noqa: F401,F403
from .factor import BinomialFactor, GcdSplit, binomial_factors, cyclotomic_roots, gcd_power_split, mgcd, resultant
from .lattice import HermiteBound, UniBasis, det_sublattice, extend_to_unimodular, hermite_constant, hnf, is_primitive, lemma_polar_bound, primitive_closure
from .laurent import (
    LaurentPoly,
    NewtonPolygon,
    evaluate_at_torsion,
    is_binomial,
    monoidal_image,
    monomial_normalize,
    newton_polygon,
    poly_arith,
    power_substitute,
    substitute_first,
    total_degree,
)
from .oracle import OracleConfig, brute_stable, chain_stabilization, enumerate_torsion_on
from .parse import parse_poly
from .stab import Limits, StableResult, Variety, restrict_to_coset, stable_curve, stable_dim1, stable_general, stable_set, torsion_cosets_curve, v_chain

__version__ = "0.1.0"
