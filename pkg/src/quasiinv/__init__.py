"""Exact-arithmetic toolkit for quasiinvariant algebras of finite
reflection groups and the associated Calogero-Moser quantum integrals."""

from .coxeter import (CoxeterGroup, MultiplicityFunction, Reflection,
                      UnsupportedType, OrderCapExceeded, DimensionMismatch,
                      act, build_group, invariant_generators)
from .polynomials import NotDivisible, Polynomial, exact_divide
from .operators import (NonPolynomialResult, RationalFunction, RationalOp,
                        SymbolNotPolynomial, op_apply, op_commutator,
                        op_compose, symbol)
from .quasi import (Arrangement, GradedBasis, arrangement_poincare,
                    arrangement_slice, is_quasiinvariant, poincare_series,
                    qm_graded_basis, qm_slice)
from .cmsystem import (Hamiltonian, PsiTruncation, QuantumIntegral,
                       ShiftOperatorRank1, SingularGram, SymbolMismatch,
                       CommutatorNonzero, ZeroSymbol, dunkl, hamiltonian,
                       integral_apply, integral_berest,
                       integral_from_invariant, kernel_series_rank1,
                       pairing_value, psi_from_shift, psi_truncation,
                       shift_rank1, verify_intertwiner)
from .harmonics import (ComplementT, Discriminant, HarmonicSpace,
                        PairingTable, adjointness_check, bracket,
                        complement_T, det_A, discriminants, duality_check,
                        freeness_check, fv_conjecture_checks,
                        harmonic_report, harmonic_space, linindep_check,
                        pairing, pairing_table, pi_m)
from .series import PoincareData, TPoly, TRational
from .reports import Report, ScenarioConfig, diff_reports
from .checks import list_checks, run

__version__ = "0.1.0"
