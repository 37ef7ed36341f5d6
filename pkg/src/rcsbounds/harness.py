"""Randomized instance generators, independent oracles, and the fuzz loop.

Determinism contract: every trial draws from a Philox stream keyed by
(seed, trial_index), so a trial's outcome depends only on the
configuration and its index, never on execution order.  Replaying one
trial reproduces its report bit for bit, and summaries aggregated over
trials are schedule-independent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .bounds import (
    ADD_FUNCTIONAL,
    ADD_MATRIX,
    GREUB_RHEINBOLDT,
    HOLDS,
    INEQUALITY_IDS,
    INT_ADD,
    INT_MULT,
    MULT_FUNCTIONAL,
    MULT_MATRIX,
    OP_PAIR_ADD,
    OP_PAIR_MULT,
    PRECONDITION_FAILED,
    PS_ADD,
    PS_IMPROVED,
    PS_MULT,
    VIOLATED,
    WEIGHTED_ADD,
    BoundReport,
    ScalarWindow,
    WeightedSequences,
    additive_matrix_bound,
    functional_additive_bound,
    functional_multiplicative_bound,
    greub_rheinboldt,
    integral_bounds,
    multiplicative_matrix_bound,
    operator_pair_bounds,
    polya_szego_additive,
    polya_szego_improved,
    polya_szego_multiplicative,
    weighted_additive,
)
from .forms import (
    FormInstance,
    OmegaPair,
    PositiveFunctional,
    check_re_condition,
    omega_from_spectra,
)
from .matalg import (
    DEFAULT_TOL,
    NotHermitianError,
    Tolerance,
    as_element,
    frobenius,
    re_part,
)
from .rng import stream

__all__ = [
    "REJECTION_CAP",
    "RejectionCapExceededError",
    "DimTooLargeError",
    "GeneratorConfig",
    "FuzzSummary",
    "gen_random_unitary",
    "gen_commuting_positive_pair",
    "gen_bounded_sequences",
    "gen_re_valid_instance",
    "gen_argmin_families",
    "oracle_psd_minors",
    "sample_window",
    "run_trial",
    "fuzz_run",
]

REJECTION_CAP = 1000

RngLike = Union[int, np.random.Generator]


class RejectionCapExceededError(Exception):
    """Rejection sampling failed to produce an admissible instance."""


class DimTooLargeError(Exception):
    """The exact-minor oracle only supports d <= 4."""


def _as_rng(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return stream(int(rng), 0)


@dataclass(frozen=True)
class GeneratorConfig:
    """Configuration shared by all fuzz generators.

    dims feeds the matrix-algebra instances, space_dims the sequence
    lengths, window_range the scalar windows, and spectrum_range the
    eigenvalue samples for commuting positive pairs.
    """

    seed: int = 0
    trials: int = 1000
    dims: tuple[int, ...] = (1, 2, 4, 8)
    space_dims: tuple[int, ...] = (4, 8, 16)
    window_range: tuple[float, float] = (0.1, 10.0)
    spectrum_range: tuple[float, float] = (0.1, 10.0)

    def __post_init__(self) -> None:
        if self.trials < 0:
            raise ValueError("trials must be nonnegative")
        if not self.dims or any(not 1 <= d <= 16 for d in self.dims):
            raise ValueError("dims must be a nonempty tuple of values in 1..16")
        if not self.space_dims or any(n < 1 for n in self.space_dims):
            raise ValueError("space_dims must be a nonempty tuple of positive values")
        for name, rng_pair in (
            ("window_range", self.window_range),
            ("spectrum_range", self.spectrum_range),
        ):
            lo, hi = rng_pair
            if not 0.0 < lo <= hi:
                raise ValueError(f"{name} must satisfy 0 < lo <= hi")


def gen_random_unitary(d: int, rng: RngLike = 0) -> np.ndarray:
    """Haar-distributed d x d unitary via QR of a complex Gaussian matrix."""
    g = _as_rng(rng)
    z = (g.standard_normal((d, d)) + 1j * g.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    phases = np.where(np.abs(diag) > 0.0, diag / np.abs(diag), 1.0)
    return q * phases


def gen_commuting_positive_pair(
    d: int,
    rng: RngLike = 0,
    spectrum_range: tuple[float, float] = (0.1, 10.0),
) -> tuple[np.ndarray, np.ndarray]:
    """Commuting strictly positive pair sharing a random eigenbasis."""
    g = _as_rng(rng)
    u = gen_random_unitary(d, g)
    lam_t = g.uniform(spectrum_range[0], spectrum_range[1], size=d)
    lam_s = g.uniform(spectrum_range[0], spectrum_range[1], size=d)
    t = re_part((u * lam_t) @ u.conj().T)
    s = re_part((u * lam_s) @ u.conj().T)
    return t, s


def gen_bounded_sequences(
    n: int, window: ScalarWindow, rng: RngLike = 0
) -> WeightedSequences:
    """Random sequences inside the window with weights in (0, 1].

    For n >= 4 the first four positions pin the window endpoints so each
    of a, A, b, B is attained.
    """
    g = _as_rng(rng)
    a_seq = g.uniform(window.a, window.A, size=n)
    b_seq = g.uniform(window.b, window.B, size=n)
    w_seq = 1.0 - g.uniform(0.0, 1.0, size=n)
    if n >= 4:
        a_seq[0] = window.a
        a_seq[1] = window.A
        b_seq[2] = window.b
        b_seq[3] = window.B
    return WeightedSequences(a_seq, b_seq, w_seq, window)


def _random_functional(d: int, g: np.random.Generator) -> PositiveFunctional:
    kind = g.integers(0, 3)
    if kind == 0:
        x0 = g.standard_normal(d) + 1j * g.standard_normal(d)
        return PositiveFunctional.vector_state(x0 / np.linalg.norm(x0))
    if kind == 1:
        return PositiveFunctional.trace(d)
    return PositiveFunctional.weighted_sum(g.uniform(0.2, 2.0, size=d))


def gen_re_valid_instance(
    kind: str,
    d: int,
    rng: RngLike = 0,
    spectrum_range: tuple[float, float] = (0.1, 10.0),
    cap: int = REJECTION_CAP,
) -> tuple[FormInstance, np.ndarray, np.ndarray, OmegaPair]:
    """Instance (form, x, y, pair) satisfying the Re hypothesis.

    kind = "module": commuting strictly positive x, y over M_d with the
    window pair read off their spectra.

    kind = "functional": a random positive functional with x sampled in
    the disk spanned by (omega, Omega) around y plus a small admissible
    perturbation, resampled until the Re check passes (cap attempts, then
    RejectionCapExceededError).  The window pair always satisfies
    Re(conj(omega) * Omega) > 0.
    """
    g = _as_rng(rng)
    if kind == "module":
        t, s = gen_commuting_positive_pair(d, g, spectrum_range)
        pair = omega_from_spectra(t, s)
        return FormInstance.module_form(d), t, s, pair
    if kind != "functional":
        raise ValueError(f"unknown instance kind {kind!r}")

    phi = _random_functional(d, g)
    form = FormInstance.functional_form(phi)

    def gaussian_matrix() -> np.ndarray:
        return g.standard_normal((d, d)) + 1j * g.standard_normal((d, d))

    def phi_norm2(m: np.ndarray) -> float:
        return phi.value(m.conj().T @ m).real

    y = gaussian_matrix()
    while phi_norm2(y) < 1e-8:
        y = gaussian_matrix()
    fyy = phi_norm2(y)

    lam_mod = g.uniform(0.5, 2.0)
    lam = lam_mod * np.exp(1j * g.uniform(0.0, 2 * np.pi))
    radius = g.uniform(0.1, 0.9) * lam_mod
    c = radius * np.exp(1j * g.uniform(0.0, 2 * np.pi))
    pair = OmegaPair(omega=complex(lam - c), Omega=complex(lam + c))

    for _ in range(cap):
        p = gaussian_matrix()
        fpp = phi_norm2(p)
        if fpp < 1e-12:
            continue
        rho = g.uniform(0.0, 0.9)
        p = p * np.sqrt(rho * radius**2 * fyy / fpp)
        x = lam * y + p
        ok, _ = check_re_condition(form, x, y, pair)
        if ok:
            return form, x, y, pair
    raise RejectionCapExceededError(
        f"no admissible x found in {cap} attempts (kind=functional, d={d})"
    )


def gen_argmin_families(n: int) -> list[tuple[str, WeightedSequences]]:
    """Three unweighted families, one per least constant of the refined bound.

    family_c2 pins every a_i at the top of [1, n] and every b_i at the
    degenerate window [1/n, 1/n]; family_c1 mirrors it; family_c3 pairs a
    rising ramp with its reversal so the balance condition
    sum(a^2)/(Aa) = sum(b^2)/(Bb) holds while the plain Cauchy-Schwarz
    inequality stays strict.
    """
    if n < 2:
        raise ValueError("families need n >= 2")
    ones = np.ones(n)
    inv = 1.0 / n
    fam_c2 = WeightedSequences(
        np.full(n, float(n)), np.full(n, inv), ones, ScalarWindow(1.0, float(n), inv, inv)
    )
    fam_c1 = WeightedSequences(
        np.full(n, inv), np.full(n, float(n)), ones, ScalarWindow(inv, inv, 1.0, float(n))
    )
    ramp = np.linspace(1.0, 2.0, n)
    fam_c3 = WeightedSequences(
        ramp, ramp[::-1].copy(), ones, ScalarWindow(1.0, 2.0, 1.0, 2.0)
    )
    return [("family_c2", fam_c2), ("family_c1", fam_c1), ("family_c3", fam_c3)]


def _det_cofactor(m: list[list[complex]]) -> complex:
    k = len(m)
    if k == 1:
        return m[0][0]
    if k == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0 + 0j
    for j in range(k):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        sign = -1 if j % 2 else 1
        total += sign * m[0][j] * _det_cofactor(minor)
    return total


def oracle_psd_minors(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Exact-minor positive-semidefiniteness oracle for d <= 4.

    Checks the real parts of all principal minors computed by cofactor
    expansion, allowing -1e-12 * max(1, ||a||_F)^k slack for a k x k
    minor.  Independent of the Jacobi eigensolver.
    """
    m = as_element(a)
    d = m.shape[0]
    if d > 4:
        raise DimTooLargeError(f"minor oracle supports d <= 4, got {d}")
    defect = float(np.linalg.norm(m - m.conj().T))
    if defect > tol.band(frobenius(m)):
        raise NotHermitianError("minor oracle requires a Hermitian matrix")
    base = max(1.0, frobenius(m))
    for k in range(1, d + 1):
        for subset in itertools.combinations(range(d), k):
            sub = [[complex(m[i, j]) for j in subset] for i in subset]
            det = _det_cofactor(sub).real
            if det < -1e-12 * base**k:
                return False
    return True


@dataclass(frozen=True)
class FuzzSummary:
    """Aggregate of one fuzz run.

    worst_seed is the trial index attaining the least margin; together
    with the configured seed it keys the Philox stream that reproduces
    the trial.
    """

    inequality_id: str
    seed: int
    trials_run: int
    holds: int
    violated: int
    precondition_failed: int
    worst_margin: Optional[float]
    worst_seed: Optional[int]

    def to_dict(self) -> dict:
        return {
            "inequality_id": self.inequality_id,
            "seed": self.seed,
            "trials_run": self.trials_run,
            "holds": self.holds,
            "violated": self.violated,
            "precondition_failed": self.precondition_failed,
            "worst_margin": self.worst_margin,
            "worst_seed": self.worst_seed,
        }


def sample_window(g: np.random.Generator, window_range: tuple[float, float]) -> ScalarWindow:
    """Random scalar window with both intervals inside window_range."""
    lo, hi = window_range
    a_pair = np.sort(g.uniform(lo, hi, size=2))
    b_pair = np.sort(g.uniform(lo, hi, size=2))
    return ScalarWindow(float(a_pair[0]), float(a_pair[1]), float(b_pair[0]), float(b_pair[1]))


def _sequence_data(
    config: GeneratorConfig, g: np.random.Generator, unit_weights: bool
) -> WeightedSequences:
    n = int(g.choice(np.asarray(config.space_dims)))
    window = sample_window(g, config.window_range)
    data = gen_bounded_sequences(n, window, g)
    if unit_weights:
        data = replace(data, w_seq=np.ones(n))
    return data


def run_trial(config: GeneratorConfig, inequality_id: str, trial_index: int) -> BoundReport:
    """Evaluate one fuzz trial; pure function of (config, id, trial_index)."""
    if inequality_id not in INEQUALITY_IDS:
        raise ValueError(f"unknown inequality id {inequality_id!r}")
    g = stream(config.seed, trial_index)
    if inequality_id in (ADD_MATRIX, MULT_MATRIX):
        d = int(g.choice(np.asarray(config.dims)))
        form, x, y, pair = gen_re_valid_instance("module", d, g, config.spectrum_range)
        if inequality_id == ADD_MATRIX:
            return additive_matrix_bound(form, x, y, pair)
        return multiplicative_matrix_bound(form, x, y, pair)
    if inequality_id in (ADD_FUNCTIONAL, MULT_FUNCTIONAL):
        d = int(g.choice(np.asarray(config.dims)))
        form, x, y, pair = gen_re_valid_instance("functional", d, g)
        phi = form.functional
        if inequality_id == ADD_FUNCTIONAL:
            return functional_additive_bound(phi, x, y, pair)
        return functional_multiplicative_bound(phi, x, y, pair)
    if inequality_id in (OP_PAIR_ADD, OP_PAIR_MULT):
        d = int(g.choice(np.asarray(config.dims)))
        t, s = gen_commuting_positive_pair(d, g, config.spectrum_range)
        v = g.standard_normal(d) + 1j * g.standard_normal(d)
        while np.linalg.norm(v) < 1e-6:
            v = g.standard_normal(d) + 1j * g.standard_normal(d)
        result = operator_pair_bounds(t, s, v)
        return result.additive if inequality_id == OP_PAIR_ADD else result.multiplicative
    unit = inequality_id in (PS_MULT, PS_ADD, PS_IMPROVED)
    data = _sequence_data(config, g, unit_weights=unit)
    if inequality_id == INT_ADD:
        return integral_bounds(data).additive
    if inequality_id == INT_MULT:
        return integral_bounds(data).multiplicative
    if inequality_id == GREUB_RHEINBOLDT:
        return greub_rheinboldt(data)
    if inequality_id == WEIGHTED_ADD:
        return weighted_additive(data)
    if inequality_id == PS_MULT:
        return polya_szego_multiplicative(data)
    if inequality_id == PS_ADD:
        return polya_szego_additive(data)
    return polya_szego_improved(data).report


def fuzz_run(config: GeneratorConfig, inequality_id: str) -> FuzzSummary:
    """Run config.trials independent trials and aggregate verdicts.

    The aggregation (counts, least margin, lowest tying trial index) is
    invariant under any reordering of the trials.
    """
    holds = violated = precondition_failed = 0
    worst: Optional[tuple[float, int]] = None
    for i in range(config.trials):
        try:
            report = run_trial(config, inequality_id, i)
        except RejectionCapExceededError:
            precondition_failed += 1
            continue
        if report.verdict == PRECONDITION_FAILED:
            precondition_failed += 1
            continue
        if report.verdict == HOLDS:
            holds += 1
        else:
            violated += 1
        candidate = (report.margin, i)
        if worst is None or candidate < worst:
            worst = candidate
    return FuzzSummary(
        inequality_id=inequality_id,
        seed=config.seed,
        trials_run=config.trials,
        holds=holds,
        violated=violated,
        precondition_failed=precondition_failed,
        worst_margin=None if worst is None else worst[0],
        worst_seed=None if worst is None else worst[1],
    )
