"""Hilbert-space construction from a generalized state over a truncated basis.

Pipeline: build the Gram matrix G[a][b] = omega(a*, b) over all canonical
words up to a length cap, split off the numerical null space, check whether
the null space is closed under left multiplication by generator letters (it
need not be; the construction only proceeds conditionally), build the
left-multiplication matrices on the quotient, and measure the reconstruction
identity omega(a*, b) = <Omega| pi(a)^dagger pi(b) |Omega> on the truncated
domain.

The representation is generally not adjoint-compatible: pi(a)^dagger differs
from pi(a*), and nothing here assumes otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import CanonicalWord, FreeAlgebra, FreeElement
from .states import GeneralizedState

GRAM_HERMITIAN_TOL = 1e-9
GRAM_PSD_TOL = 1e-8
NULL_TOL = 1e-8
LEFT_IDEAL_TOL = 1e-8
SUPPORT_TOL = 1e-12


class GnsError(Exception):
    pass


class GramPropertyError(GnsError):
    """The Gram matrix violates a required structural property."""

    def __init__(self, prop: str, magnitude: float):
        super().__init__(f"gram matrix violates {prop} (magnitude {magnitude:.3e})")
        self.property = prop
        self.magnitude = magnitude


class RepresentationError(GnsError):
    """Left-multiplication matrices cannot be built under the given tolerance."""


@dataclass(frozen=True)
class WordBasis:
    """All canonical words of length <= max_len, empty word first."""

    algebra: FreeAlgebra
    max_len: int
    words: tuple

    @classmethod
    def build(cls, algebra: FreeAlgebra, max_len: int) -> "WordBasis":
        return cls(algebra, int(max_len), tuple(algebra.words(int(max_len))))

    def __len__(self) -> int:
        return len(self.words)

    def index(self) -> dict:
        return {w: i for i, w in enumerate(self.words)}

    def elements(self) -> list[FreeElement]:
        return [self.algebra.word_element(w) for w in self.words]


def expected_basis_size(algebra: FreeAlgebra, max_len: int) -> int:
    """1 + sum over admissible factor sequences of prod(d_i**2 - 1)."""
    sizes = {f: len(algebra.factor(f).basis) for f in algebra.factor_indices}
    total = 1
    frontier = {f: sizes[f] for f in algebra.factor_indices}
    for _ in range(max_len):
        total += sum(frontier.values())
        nxt = {}
        for f in algebra.factor_indices:
            nxt[f] = sizes[f] * sum(v for g, v in frontier.items() if g != f)
        frontier = nxt
    return total


_GRAM_BLOCK = 64


def gram(state: GeneralizedState, basis: WordBasis, jobs: int = 1) -> np.ndarray:
    """G[a][b] = omega(a*, b) over the word basis.

    Computed through the state's cached forward vectors; equal to evaluating
    eval_bilinear(star(a), b) entry by entry (the test suite cross-checks the
    two routes).  Row blocks are independent and of fixed size, so the result
    is identical for any worker count.
    """
    cols = [np.asarray(state.forward_vector(w)) for w in basis.words]
    r = np.stack(cols, axis=1)
    n = r.shape[1]
    out = np.empty((n, n), dtype=complex)
    blocks = [(s, min(s + _GRAM_BLOCK, n)) for s in range(0, n, _GRAM_BLOCK)]

    def fill(block):
        s, e = block
        out[s:e, :] = r[:, s:e].conj().T @ r

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=int(jobs)) as pool:
            list(pool.map(fill, blocks))
    else:
        for block in blocks:
            fill(block)
    return out


@dataclass(frozen=True)
class NullSpaceResult:
    eigenvalues: np.ndarray
    null_rank: int
    null_vectors: np.ndarray      # columns: coefficient vectors spanning the null space
    quotient_basis: np.ndarray    # columns: G-orthonormal vectors spanning the complement
    cutoff: float

    @property
    def quotient_dim(self) -> int:
        return self.quotient_basis.shape[1]


def null_space(g: np.ndarray, tol: float = NULL_TOL) -> NullSpaceResult:
    """Eigen-split of a hermitian PSD Gram matrix into null and quotient parts.

    The cutoff scales with the largest eigenvalue; eigenvectors above it are
    rescaled to orthonormality in the G-inner product.
    """
    g = np.asarray(g, dtype=complex)
    herm_err = float(np.max(np.abs(g - g.conj().T))) if g.size else 0.0
    if herm_err > GRAM_HERMITIAN_TOL:
        raise GramPropertyError("hermiticity", herm_err)
    evals, evecs = np.linalg.eigh((g + g.conj().T) / 2.0)
    if evals.size and evals[0] < -GRAM_PSD_TOL:
        raise GramPropertyError("positive semidefiniteness", float(-evals[0]))
    scale = max(float(evals[-1]), 1.0) if evals.size else 1.0
    cutoff = tol * scale
    null_mask = evals < cutoff
    null_vectors = evecs[:, null_mask]
    keep = ~null_mask
    quotient = evecs[:, keep] / np.sqrt(evals[keep])
    return NullSpaceResult(
        eigenvalues=evals,
        null_rank=int(null_mask.sum()),
        null_vectors=null_vectors,
        quotient_basis=quotient,
        cutoff=float(cutoff),
    )


@dataclass(frozen=True)
class LeftIdealReport:
    """Measured closure of the null space under left letter multiplication.

    ``max_violation`` covers the pairs whose product stays inside the word
    length cap of the basis (the quotient only represents those); pairs whose
    product leaves the basis are counted as skipped, and
    ``max_violation_unrestricted`` evaluates every pair exactly in the full
    algebra as an additional diagnostic.
    """

    max_violation: float
    evaluated_pairs: int
    skipped_pairs: int
    max_violation_unrestricted: float
    null_rank: int

    def passed(self, tol: float = LEFT_IDEAL_TOL) -> bool:
        return self.max_violation <= tol


def check_left_ideal(
    state: GeneralizedState,
    basis: WordBasis,
    ns: NullSpaceResult,
) -> LeftIdealReport:
    """For each null vector a and generator letter b, measure omega((ba)*, ba)."""
    algebra = basis.algebra
    nulls = ns.null_vectors
    if nulls.shape[1] == 0:
        return LeftIdealReport(0.0, 0, 0, 0.0, 0)
    n_words = len(basis.words)
    word_elems = basis.elements()
    max_restricted = 0.0
    max_unrestricted = 0.0
    evaluated = 0
    skipped = 0
    for letter in algebra.generator_letters():
        b_el = algebra.word_element((letter,))
        # per basis word: the product b*w as a forward-vector combination
        rho = np.zeros((len(state.forward_vector(())), n_words), dtype=complex)
        lengths = np.zeros(n_words, dtype=int)
        for j, w_el in enumerate(word_elems):
            prod = b_el * w_el
            vec = np.zeros(rho.shape[0], dtype=complex)
            longest = 0
            for w, c in prod.items():
                vec += c * state.forward_vector(w)
                longest = max(longest, len(w))
            rho[:, j] = vec
            lengths[j] = longest
        over_cap = lengths > basis.max_len
        images = rho @ nulls                      # forward vector of b*a per null a
        violations = np.sum(np.abs(images) ** 2, axis=0)
        support = np.abs(nulls) > SUPPORT_TOL
        stays_in = ~(support[over_cap, :].any(axis=0))
        max_unrestricted = max(max_unrestricted, float(violations.max(initial=0.0)))
        if stays_in.any():
            max_restricted = max(
                max_restricted, float(violations[stays_in].max(initial=0.0))
            )
        evaluated += int(stays_in.sum())
        skipped += int((~stays_in).sum())
    return LeftIdealReport(
        max_violation=max_restricted,
        evaluated_pairs=evaluated,
        skipped_pairs=skipped,
        max_violation_unrestricted=max_unrestricted,
        null_rank=ns.null_rank,
    )


def _quotient_coords(ns: NullSpaceResult, g: np.ndarray) -> np.ndarray:
    """Coordinates of every basis word class in the quotient basis (r x N)."""
    return ns.quotient_basis.conj().T @ g


def represent(
    state: GeneralizedState,
    basis: WordBasis,
    ns: NullSpaceResult,
    report: LeftIdealReport,
    letter: tuple[int, int],
    tol: float = LEFT_IDEAL_TOL,
    coords: np.ndarray | None = None,
) -> np.ndarray:
    """Matrix of [w] -> [letter * w] in quotient coordinates.

    The domain is restricted to classes of words of length <= max_len - 1 so
    that images stay inside the computed basis; products that would leave the
    basis are an error, never silently projected.  Requires the left-ideal
    report to pass, otherwise the map is not well-defined on classes.
    """
    if not report.passed(tol):
        raise RepresentationError(
            "null space is not closed under left multiplication "
            f"(max violation {report.max_violation:.3e} > {tol:.1e}); "
            "the quotient action is not well-defined"
        )
    algebra = basis.algebra
    if coords is None:
        coords = _quotient_coords(ns, gram(state, basis))
    index = basis.index()
    domain = [i for i, w in enumerate(basis.words) if len(w) <= basis.max_len - 1]
    if not domain:
        raise RepresentationError("basis has no words inside the domain cap")
    b_el = algebra.word_element((letter,))
    s = coords[:, domain]
    y = np.zeros((coords.shape[0], len(domain)), dtype=complex)
    for col, i in enumerate(domain):
        prod = b_el * algebra.word_element(basis.words[i])
        vec = np.zeros(len(basis.words), dtype=complex)
        for w, c in prod.items():
            j = index.get(w)
            if j is None:
                raise RepresentationError(
                    f"product of {letter} with word {basis.words[i]} leaves the "
                    "truncated basis"
                )
            vec[j] += c
        y[:, col] = coords @ vec
    return y @ np.linalg.pinv(s, rcond=1e-10)


@dataclass(frozen=True)
class GnsResult:
    basis: WordBasis
    gram: np.ndarray
    eigenvalues: np.ndarray
    null_rank: int
    quotient_basis: np.ndarray
    omega_vector: np.ndarray
    letter_reps: dict | None
    left_ideal: LeftIdealReport
    reconstruction_error: float | None

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0]) if self.eigenvalues.size else 0.0

    @property
    def quotient_dim(self) -> int:
        return self.quotient_basis.shape[1]


def represent_word(result: GnsResult, word: CanonicalWord) -> np.ndarray:
    """Ordered product of letter representations for a canonical word."""
    if result.letter_reps is None:
        raise RepresentationError("letter representations were not built")
    if len(word) > result.basis.max_len - 1:
        raise RepresentationError(
            f"word of length {len(word)} is outside the representation domain "
            f"(max {result.basis.max_len - 1})"
        )
    dim = result.quotient_basis.shape[1]
    out = np.eye(dim, dtype=complex)
    for letter in word:
        out = out @ result.letter_reps[letter]
    return out


def reconstruct_check(state: GeneralizedState, basis: WordBasis, result: GnsResult) -> float:
    """max |omega(a*, b) - <Omega| pi(a)^dagger pi(b) |Omega>| on the domain."""
    if result.letter_reps is None:
        raise RepresentationError("letter representations were not built")
    domain = [i for i, w in enumerate(basis.words) if len(w) <= basis.max_len - 1]
    omega = result.omega_vector
    vecs = np.empty((omega.shape[0], len(domain)), dtype=complex)
    for col, i in enumerate(domain):
        v = omega
        for letter in reversed(basis.words[i]):
            v = result.letter_reps[letter] @ v
        vecs[:, col] = v
    model = vecs.conj().T @ vecs
    target = result.gram[np.ix_(domain, domain)]
    return float(np.max(np.abs(model - target)))


def build_gns(
    state: GeneralizedState,
    max_len: int = 3,
    null_tol: float = NULL_TOL,
    left_ideal_tol: float = LEFT_IDEAL_TOL,
    jobs: int = 1,
) -> GnsResult:
    """Run the full pipeline; representation steps run only when permitted."""
    basis = WordBasis.build(state.algebra, max_len)
    g = gram(state, basis, jobs=jobs)
    ns = null_space(g, tol=null_tol)
    report = check_left_ideal(state, basis, ns)
    coords = _quotient_coords(ns, g)
    letter_reps = None
    recon = None
    if report.passed(left_ideal_tol):
        letter_reps = {
            letter: represent(
                state, basis, ns, report, letter, tol=left_ideal_tol, coords=coords
            )
            for letter in state.algebra.generator_letters()
        }
    result = GnsResult(
        basis=basis,
        gram=g,
        eigenvalues=ns.eigenvalues,
        null_rank=ns.null_rank,
        quotient_basis=ns.quotient_basis,
        omega_vector=coords[:, 0].copy(),
        letter_reps=letter_reps,
        left_ideal=report,
        reconstruction_error=None,
    )
    if letter_reps is not None:
        recon = reconstruct_check(state, basis, result)
        result = GnsResult(
            basis=result.basis,
            gram=result.gram,
            eigenvalues=result.eigenvalues,
            null_rank=result.null_rank,
            quotient_basis=result.quotient_basis,
            omega_vector=result.omega_vector,
            letter_reps=result.letter_reps,
            left_ideal=result.left_ideal,
            reconstruction_error=recon,
        )
    return result


def report_obj(result: GnsResult) -> dict:
    """Machine-readable summary of a pipeline run."""
    return {
        "basisSize": len(result.basis),
        "nullRank": result.null_rank,
        "minEigenvalue": result.min_eigenvalue,
        "leftIdealMaxViolation": result.left_ideal.max_violation,
        "reconstructionMaxError": result.reconstruction_error,
        "quotientDim": result.quotient_dim,
        "leftIdealEvaluatedPairs": result.left_ideal.evaluated_pairs,
        "leftIdealSkippedPairs": result.left_ideal.skipped_pairs,
        "leftIdealMaxViolationUnrestricted": result.left_ideal.max_violation_unrestricted,
    }
