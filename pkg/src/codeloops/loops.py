"""Coded extensions of CVSs via the semidirect central product.

An element is (z, v): central value z and vector part v, denoting the
normal form z * x_1^{v_1}(x_2^{v_2}(...)).  Multiplication splits off the
last coordinate (C = D + <x_k> with dim D = k-1) and applies the product

  (z1, d1, e1)(z2, d2, e2) = (z0 + z1 + z2, d1 d2, e1 e2)
  z0 = chi(e1, d2) + alpha(d1, e1 - d2, e2) + 2 alpha(d1, e1, d2)
       - 2 alpha(e1, d2, e2)

recursively.  Unrolling the recursion gives a level sum

  theta(u, w) = sum_m [ u_m chi(x_m, w_<m) - (w_m + 2 u_m) alpha(u_<m, w_<m, x_m)
                        + sigma_m * carry_p(u_m, w_m) ]

(w_<m is w with slots >= m zeroed) which is what both the per-element and
the vectorized product implement; the literal recursion is kept as an
oracle and the two are compared exhaustively in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .cvs import (
    CheckResult,
    Cvs,
    ValidationReport,
    adjoint_translate,
    alpha_rows,
    chi_rows,
    cvs_new,
    pair_list,
    sigma_rows,
    triple_list,
    validate_axioms,
)
from .modular import FpVector, fp_vector
from .tables import add_index_table, rank_rows, vector_table

DEFAULT_VERIFY_BUDGET = 3 ** 6
DEFAULT_TABLE_BUDGET = 2 ** 13
_THETA_CACHE_MAX = 4096  # largest |C| for which the full theta table is kept


@dataclass(frozen=True)
class CodedLoopElement:
    """(central value, vector part); the pair is the normal form."""

    z: int
    v: tuple


class CentralExtensionLoop:
    """Shared machinery for loops built from a cocycle theta on C x C.

    Subclasses provide theta; everything else (products, inverses, powers,
    commutators, associators, tables) is generic.  zmod is the order of the
    central subgroup; moduli are the slot orders of C.
    """

    zmod: int
    moduli: tuple

    def __init__(self, zmod: int, moduli: tuple):
        self.zmod = zmod
        self.moduli = tuple(moduli)
        self.csize = 1
        for m in self.moduli:
            self.csize *= m
        self.order = self.zmod * self.csize
        self._theta_table: Optional[np.ndarray] = None

    # -- subclass surface --

    def theta_pair(self, u: tuple, w: tuple) -> int:
        raise NotImplementedError

    def _build_theta_table(self) -> np.ndarray:
        """Default: fill elementwise; subclasses override with bulk math."""
        V = vector_table(self.moduli)
        n = V.shape[0]
        T = np.zeros((n, n), dtype=np.int64)
        rows = [tuple(r) for r in V.tolist()]
        for a, u in enumerate(rows):
            for b, w in enumerate(rows):
                T[a, b] = self.theta_pair(u, w)
        return T % self.zmod

    # -- element plumbing --

    @property
    def k(self) -> int:
        return len(self.moduli)

    def element(self, z: int, v) -> CodedLoopElement:
        coords = tuple(int(x) % m for x, m in zip(tuple(v), self.moduli))
        if len(coords) != self.k:
            raise ValueError("vector part has wrong dimension")
        return CodedLoopElement(int(z) % self.zmod, coords)

    @property
    def identity(self) -> CodedLoopElement:
        return CodedLoopElement(0, (0,) * self.k)

    def generator(self, i: int) -> CodedLoopElement:
        """The coset representative x_{i+1} = (0, e_i)."""
        return self.element(0, [1 if t == i else 0 for t in range(self.k)])

    def central_generator(self) -> CodedLoopElement:
        return CodedLoopElement(1 % self.zmod, (0,) * self.k)

    def rank(self, v: tuple) -> int:
        r = 0
        for x, m in zip(v, self.moduli):
            r = r * m + (x % m)
        return r

    def unrank(self, r: int) -> tuple:
        out = []
        for m in reversed(self.moduli):
            out.append(r % m)
            r //= m
        return tuple(reversed(out))

    def index(self, a: CodedLoopElement) -> int:
        """Table index: z * |C| + mixed-radix rank of v."""
        return a.z * self.csize + self.rank(a.v)

    def element_at(self, idx: int) -> CodedLoopElement:
        return CodedLoopElement(idx // self.csize, self.unrank(idx % self.csize))

    def elements(self) -> Iterator[CodedLoopElement]:
        for idx in range(self.order):
            yield self.element_at(idx)

    # -- loop operations --

    def theta_table(self) -> np.ndarray:
        if self._theta_table is None:
            if self.csize > _THETA_CACHE_MAX:
                raise ValueError("theta table too large (|C| = %d)" % self.csize)
            self._theta_table = self._build_theta_table()
        return self._theta_table

    def _theta(self, u: tuple, w: tuple) -> int:
        if self._theta_table is not None:
            return int(self._theta_table[self.rank(u), self.rank(w)])
        return self.theta_pair(u, w) % self.zmod

    def mul(self, a: CodedLoopElement, b: CodedLoopElement) -> CodedLoopElement:
        z = (a.z + b.z + self._theta(a.v, b.v)) % self.zmod
        v = tuple((x + y) % m for x, y, m in zip(a.v, b.v, self.moduli))
        return CodedLoopElement(z, v)

    def inv(self, a: CodedLoopElement) -> CodedLoopElement:
        nv = tuple((-x) % m for x, m in zip(a.v, self.moduli))
        z = (-a.z - self._theta(a.v, nv)) % self.zmod
        return CodedLoopElement(z, nv)

    def pow(self, a: CodedLoopElement, n: int) -> CodedLoopElement:
        """Iterated product with the convention a^(n+1) = a * a^n."""
        if n < 0:
            return self.pow(self.inv(a), -n)
        acc = self.identity
        for _ in range(n):
            acc = self.mul(a, acc)
        return acc

    def element_order(self, a: CodedLoopElement) -> int:
        acc = a
        n = 1
        while acc != self.identity:
            acc = self.mul(a, acc)
            n += 1
            if n > self.order:
                raise AssertionError("order search ran past |L|")
        return n

    def commutator(self, a: CodedLoopElement, b: CodedLoopElement) -> CodedLoopElement:
        """[a,b] = (ba)^(-1) (ab)."""
        return self.mul(self.inv(self.mul(b, a)), self.mul(a, b))

    def associator(self, a, b, c) -> CodedLoopElement:
        """[a,b,c] = (a(bc))^(-1) ((ab)c)."""
        return self.mul(self.inv(self.mul(a, self.mul(b, c))),
                        self.mul(self.mul(a, b), c))

    # -- tables --

    def table_array(self, max_order: int = DEFAULT_TABLE_BUDGET) -> np.ndarray:
        """Full Cayley table over element indices z*|C| + rank(v)."""
        if self.order > max_order:
            raise ValueError("order %d exceeds table budget %d"
                             % (self.order, max_order))
        T = self.theta_table().astype(np.int64)
        n, zm, cs = self.order, self.zmod, self.csize
        add = _add_rank_table(self.moduli)
        out = np.zeros((n, n), dtype=np.int64)
        for za in range(zm):
            for zb in range(zm):
                zres = (za + zb + T) % zm
                block = zres * cs + add
                out[za * cs:(za + 1) * cs, zb * cs:(zb + 1) * cs] = block
        return out

    def to_table(self, max_order: int = DEFAULT_TABLE_BUDGET):
        from .analysis import LoopTable
        return LoopTable(self.table_array(max_order=max_order))


def _add_rank_table(moduli: tuple) -> np.ndarray:
    return add_index_table(moduli)


def _neg_rank(moduli: tuple) -> np.ndarray:
    V = vector_table(moduli)
    return rank_rows(-V, moduli)


class CodedLoop(CentralExtensionLoop):
    """The coded extension of a CVS: order p^(1+k), Z = {(z, 0)} central,
    x^p = sigma, [x,y] = chi, [x,y,z] = alpha."""

    def __init__(self, cvs: Cvs):
        super().__init__(cvs.p, (cvs.p,) * cvs.k)
        self.cvs = cvs
        self.p = cvs.p

    def __repr__(self):
        return "CodedLoop(order %d, %r)" % (self.order, self.cvs)

    def theta_pair(self, u: tuple, w: tuple) -> int:
        C, p, k = self.cvs, self.p, self.k
        if k == 0:
            return 0
        U = np.array([u], dtype=np.int64)
        W = np.array([w], dtype=np.int64)
        z = 0
        for m in range(k):
            Um = U.copy()
            Um[:, m:] = 0
            Wm = W.copy()
            Wm[:, m:] = 0
            em = np.zeros((1, k), dtype=np.int64)
            em[0, m] = 1
            z += u[m] * int(chi_rows(C, em, Wm)[0])
            z -= (w[m] + 2 * u[m]) * int(alpha_rows(C, Um, Wm, em)[0])
            z += C.sigma_basis[m] * ((u[m] + w[m]) // p)
        return z % p

    def _build_theta_table(self) -> np.ndarray:
        C, p, k = self.cvs, self.p, self.k
        V = vector_table(self.moduli)
        n = V.shape[0]
        Vf = V.astype(np.float32)
        # The chi contribution sum_m u_m chi(e_m, w-prefix) collapses to one
        # (n,k)@(k,n) product; the rest accumulates in float32, exact here
        # since every entry stays far below 2^24.  Keeps n = 4096 fast.
        R = np.zeros((k, n), dtype=np.float32)
        T = np.zeros((n, n), dtype=np.float32)
        for m in range(k):
            Vp = V.copy()
            Vp[:, m:] = 0
            em = np.zeros((n, k), dtype=np.int64)
            em[:, m] = 1
            R[m] = chi_rows(C, em, Vp)
            B = C.alpha_tensor[:, :, m]
            if B.any():
                Pf = Vp.astype(np.float32)
                AL = (Pf @ B.astype(np.float32)) @ Pf.T
                T -= (Vf[None, :, m] + 2 * Vf[:, m, None]) * AL
            if C.sigma_basis[m]:
                T += C.sigma_basis[m] * (
                    (V[:, m, None] + V[None, :, m]) // p).astype(np.float32)
        T += Vf @ R
        return np.rint(T).astype(np.int64) % p

    def sigma_of(self, v) -> int:
        return int(sigma_rows(self.cvs, np.array([tuple(v)], dtype=np.int64))[0])

    def alpha_bilinear_for(self, kvec: tuple) -> np.ndarray:
        """B[i, j] = alpha(e_i, kvec, e_j), so alpha(u, kvec, w) = u B w."""
        kk = np.array(tuple(kvec), dtype=np.int64)
        return np.einsum("m,imj->ij", kk, self.cvs.alpha_tensor) % self.p


def mul_recursive(L: CodedLoop, a: CodedLoopElement, b: CodedLoopElement,
                  flavor: str = "general") -> CodedLoopElement:
    """Literal recursive semidirect central product; oracle for mul.

    flavor selects the z0 error term: 'general' is the four-factor formula;
    'p2', 'p3', 'big' are the specializations valid for p = 2, p = 3 and
    p > 3.  All agree with CodedLoop.mul on every input (tested).
    """
    C, p = L.cvs, L.p

    def lift(prefix: tuple, k: int) -> np.ndarray:
        row = np.zeros((1, L.k), dtype=np.int64)
        row[0, :k] = prefix
        return row

    def rec(z1, u, z2, w, k):
        if k == 0:
            return (z1 + z2) % p, ()
        m, nn = u[k - 1], w[k - 1]
        d1, d2 = u[:k - 1], w[:k - 1]
        e1 = np.zeros((1, L.k), dtype=np.int64)
        e1[0, k - 1] = m
        e2 = np.zeros((1, L.k), dtype=np.int64)
        e2[0, k - 1] = nn
        D1, D2 = lift(d1, k - 1), lift(d2, k - 1)
        chi_ = int(chi_rows(C, e1, D2)[0])
        if flavor == "general":
            z0 = (chi_
                  + int(alpha_rows(C, D1, (e1 - D2) % p, e2)[0])
                  + 2 * int(alpha_rows(C, D1, e1, D2)[0])
                  - 2 * int(alpha_rows(C, e1, D2, e2)[0]))
        elif flavor == "p2":
            z0 = chi_ + int(alpha_rows(C, D1, (e1 + D2) % 2, e2)[0])
        elif flavor == "p3":
            z0 = (chi_
                  + int(alpha_rows(C, D1, (e1 - D2) % 3, e2)[0])
                  - int(alpha_rows(C, D1, e1, D2)[0])
                  + int(alpha_rows(C, e1, D2, e2)[0]))
        elif flavor == "big":
            z0 = chi_
        else:
            raise ValueError("unknown flavor %r" % flavor)
        zd, dd = rec(0, d1, 0, d2, k - 1)
        ze = C.sigma_basis[k - 1] * ((m + nn) // p)
        ee = (m + nn) % p
        return (z0 + z1 + z2 + zd + ze) % p, dd + (ee,)

    z, v = rec(a.z, a.v, b.z, b.v, L.k)
    return CodedLoopElement(z, v)


def build(V: Cvs, validate: bool = True) -> CodedLoop:
    """Build the coded extension of V (validated when |C| is small).

    validate=False skips the axiom battery; use it when V came out of a
    transform of an already-validated CVS."""
    if V.p > 3 and any(V.alpha_flat):
        raise ValueError("invalid CVS: nonzero alpha with p > 3")
    if validate and V.size <= DEFAULT_VERIFY_BUDGET:
        rep = validate_axioms(V)
        if not rep.ok:
            raise ValueError("invalid CVS: %s"
                             % "; ".join(str(c) for c in rep.failures()))
    return CodedLoop(V)


class KappaIsotope(CentralExtensionLoop):
    """The kappa-isotope: a o b = ab * alpha(v_a, kappa, v_b), same carrier.

    Works for any central-extension loop exposing alpha_bilinear_for."""

    def __init__(self, base: CentralExtensionLoop, kappa):
        coords = tuple(kappa.coords) if isinstance(kappa, FpVector) else tuple(kappa)
        if len(coords) != base.k:
            raise ValueError("kappa has wrong dimension")
        super().__init__(base.zmod, base.moduli)
        self.base = base
        self.p = getattr(base, "p", base.zmod)
        self.kappa = tuple(int(c) % m for c, m in zip(coords, base.moduli))
        self._B = base.alpha_bilinear_for(self.kappa)
        # The isotope is itself a coded extension, of the adjoint translate
        # by 2*kappa: the bilinear shift moves commutators by
        # alpha(c,k,d) - alpha(d,k,c) = 2 alpha(c,k,d) and nothing else.
        # For p = 3 that is the translate by -kappa; for p = 2 it cancels,
        # so the isotope realizes the base data itself (G-loops).
        # Recording the CVS lets the standard verifier check the laws.
        base_cvs = getattr(base, "cvs", None)
        if isinstance(base_cvs, Cvs):
            k2 = fp_vector([(2 * c) % base_cvs.p for c in self.kappa],
                           base_cvs.p)
            self.cvs = adjoint_translate(base_cvs, k2)

    def theta_pair(self, u: tuple, w: tuple) -> int:
        shift = int(np.array(u, dtype=np.int64) @ self._B
                    @ np.array(w, dtype=np.int64))
        return (self.base.theta_pair(u, w) + shift) % self.zmod

    def _build_theta_table(self) -> np.ndarray:
        V = vector_table(self.moduli)
        shift = (V @ self._B) @ V.T
        return (self.base.theta_table().astype(np.int64) + shift) % self.zmod


def kappa_isotope(L: CentralExtensionLoop, kvec) -> KappaIsotope:
    return KappaIsotope(L, kvec)


class SdcpLoop(CentralExtensionLoop):
    """Semidirect central product of two coded extensions inside an ambient CVS.

    Elements are flattened (z, d ++ e).  The d and e parts multiply in
    their own extensions; the correction z0 uses the ambient forms on the
    embedded images.  Both factors may themselves be SdcpLoops, so larger
    pieces can be glued iteratively.
    """

    def __init__(self, Dext: CentralExtensionLoop, Eext: CentralExtensionLoop,
                 ambient: Cvs, embedD: list, embedE: list):
        if Dext.zmod != ambient.p or Eext.zmod != ambient.p:
            raise ValueError("central orders do not match the ambient CVS")
        if len(embedD) != Dext.k or len(embedE) != Eext.k:
            raise ValueError("embedding size does not match factor dimension")
        super().__init__(ambient.p, Dext.moduli + Eext.moduli)
        self.Dext, self.Eext, self.ambient = Dext, Eext, ambient
        self.embedD = [np.array(v.coords, dtype=np.int64) for v in embedD]
        self.embedE = [np.array(v.coords, dtype=np.int64) for v in embedE]
        self._check_embedding()

    def _check_embedding(self):
        from .modular import _rank_mod_p

        amb, p = self.ambient, self.ambient.p
        stack = [[int(x) for x in v] for v in self.embedD + self.embedE]
        if stack and _rank_mod_p([r[:] for r in stack], p) != len(stack):
            raise ValueError("embedded subspaces are linearly dependent")
        for looppart, emb in ((self.Dext, self.embedD), (self.Eext, self.embedE)):
            sub = getattr(looppart, "cvs", None)
            if sub is None:
                continue
            got = restricted_cvs(amb, [fp_vector(v.tolist(), p) for v in emb])
            if (got.sigma_basis, got.chi_flat, got.alpha_flat) != (
                    sub.sigma_basis, sub.chi_flat, sub.alpha_flat):
                raise ValueError("ambient restriction does not match the "
                                 "factor's CVS")

    @property
    def cvs(self) -> Cvs:
        """Restriction of the ambient CVS to the concatenated basis."""
        p = self.ambient.p
        vecs = [fp_vector(v.tolist(), p) for v in self.embedD + self.embedE]
        return restricted_cvs(self.ambient, vecs)

    def _split(self, v: tuple):
        kd = self.Dext.k
        return v[:kd], v[kd:]

    def _lift(self, part: tuple, emb: list) -> np.ndarray:
        amb_k = self.ambient.k
        out = np.zeros((1, amb_k), dtype=np.int64)
        for c, vec in zip(part, emb):
            out[0] += c * vec
        return out % self.ambient.p

    def theta_pair(self, u: tuple, w: tuple) -> int:
        p = self.zmod
        d1, e1 = self._split(u)
        d2, e2 = self._split(w)
        zd = self.Dext.mul(CodedLoopElement(0, d1), CodedLoopElement(0, d2)).z
        ze = self.Eext.mul(CodedLoopElement(0, e1), CodedLoopElement(0, e2)).z
        E1, D2, E2 = (self._lift(e1, self.embedE), self._lift(d2, self.embedD),
                      self._lift(e2, self.embedE))
        D1 = self._lift(d1, self.embedD)
        amb = self.ambient
        z0 = (int(chi_rows(amb, E1, D2)[0])
              + int(alpha_rows(amb, D1, (E1 - D2) % p, E2)[0])
              + 2 * int(alpha_rows(amb, D1, E1, D2)[0])
              - 2 * int(alpha_rows(amb, E1, D2, E2)[0]))
        return (z0 + zd + ze) % p


def restricted_cvs(amb: Cvs, vecs: list) -> Cvs:
    """The CVS induced on the span of the given (independent) vectors,
    with the vectors as its basis."""
    p = amb.p
    rows = np.array([v.coords for v in vecs], dtype=np.int64)
    k = len(vecs)
    sig = tuple(int(x) for x in sigma_rows(amb, rows)) if k else ()
    chi = {}
    for i, j in pair_list(k):
        chi[(i, j)] = int(chi_rows(amb, rows[None, i], rows[None, j])[0])
    alpha = {}
    for i, j, l in triple_list(k):
        alpha[(i, j, l)] = int(
            alpha_rows(amb, rows[None, i], rows[None, j], rows[None, l])[0])
    return cvs_new(p, k, sig, chi, alpha)


def semidirect_central_product(Dext, Eext, ambient: Cvs,
                               embedD: list, embedE: list) -> SdcpLoop:
    return SdcpLoop(Dext, Eext, ambient, embedD, embedE)


# -- bulk verification -------------------------------------------------------

def _comm_table(L: CentralExtensionLoop) -> np.ndarray:
    """z-part of [(0,u),(0,w)] for all u, w (the v-part is always 0; the
    central lifts cancel structurally, so this covers all loop pairs)."""
    T = L.theta_table().astype(np.int64)
    add = _add_rank_table(L.moduli)
    neg = _neg_rank(L.moduli)
    s = add  # s[u, w] = rank of u + w
    return (T - T.T - T[s, neg[s]] + T[neg[s], s]) % L.zmod


def _assoc_tables(L: CentralExtensionLoop, chunk: int = 64):
    """Yield (slice, z-part of [(0,u),(0,w),(0,t)]) over chunks of u."""
    T = L.theta_table().astype(np.int64)
    add = _add_rank_table(L.moduli)
    neg = _neg_rank(L.moduli)
    n = T.shape[0]
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        u = np.arange(lo, hi)[:, None, None]
        w = np.arange(n)[None, :, None]
        t = np.arange(n)[None, None, :]
        wt = add[w, t]
        uw = add[u, w]
        s = add[u, wt]
        zA = T[w, t] + T[u, wt]
        zB = T[u, w] + T[uw, t]
        out = (zB - zA - T[s, neg[s]] + T[neg[s], s]) % L.zmod
        yield slice(lo, hi), out


def verify_coded_extension(L: CodedLoop, budget: int = DEFAULT_VERIFY_BUDGET,
                           samples: int = 100000, seed: int = 0) -> ValidationReport:
    """Check x^p = sigma(c), [x,y] = chi(c,d), [x,y,z] = alpha(c,d,e).

    Exhaustive over C, C^2, C^3 when |C| <= budget; otherwise on seeded
    samples.  Central lifts cancel in commutators and associators, so
    quantifying over C is exact; a sampled lift check is included anyway.
    """
    from .cvs import alpha_tensor_table, chi_table, sigma_table

    C = L.cvs
    n = L.csize
    checks = []
    exhaustive = n <= budget
    rng = np.random.default_rng(seed)

    if exhaustive:
        T = L.theta_table().astype(np.int64)
        add = _add_rank_table(L.moduli)
        # CEpower: gamma^p = sigma(c) for every gamma, all central lifts
        zacc = np.zeros(n, dtype=np.int64)
        racc = np.zeros(n, dtype=np.int64)
        ar = np.arange(n)
        for _ in range(L.p):
            zacc = zacc + T[ar, racc]
            racc = add[ar, racc]
        sig = sigma_table(C)
        ok = np.all(racc == 0) and np.all(zacc % L.p == sig)
        checks.append(CheckResult("CEpower", "exhaustive", bool(ok),
                                  None if ok else _first_bad_vec(L, (zacc % L.p) != sig)))
        # CEcommute
        comm = _comm_table(L)
        chi = chi_table(C)
        bad = comm != chi
        checks.append(CheckResult("CEcommute", "exhaustive", not bad.any(),
                                  _witness2(L, bad)))
        # CEassociate
        okassoc = True
        wit = None
        if n <= 256:
            alph = alpha_tensor_table(C).astype(np.int64)
            for sl, az in _assoc_tables(L):
                bad = az != alph[sl]
                if bad.any():
                    okassoc = False
                    wit = _witness3(L, bad, sl)
                    break
        else:
            V = vector_table(L.moduli)
            for sl, az in _assoc_tables(L):
                uu = np.repeat(np.arange(sl.start, sl.stop), n * n)
                ww = np.tile(np.repeat(np.arange(n), n), sl.stop - sl.start)
                tt = np.tile(np.arange(n), (sl.stop - sl.start) * n)
                av = alpha_rows(C, V[uu], V[ww], V[tt]).reshape(az.shape)
                bad = az != av
                if bad.any():
                    okassoc = False
                    wit = _witness3(L, bad, sl)
                    break
        checks.append(CheckResult("CEassociate", "exhaustive", okassoc, wit))
    else:
        V = vector_table(L.moduli)
        idx = rng.integers(0, n, size=(3, samples))
        zlift = rng.integers(0, L.p, size=(3, samples))
        # sampled mode uses the theta table when available for speed
        T = L.theta_table().astype(np.int64) if n <= _THETA_CACHE_MAX else None
        if T is not None:
            add = _add_rank_table(L.moduli)
            neg = _neg_rank(L.moduli)
            u, w, t = idx
            # powers
            zacc = np.zeros(samples, dtype=np.int64)
            racc = np.zeros(samples, dtype=np.int64)
            for _ in range(L.p):
                zacc = zacc + T[u, racc]
                racc = add[u, racc]
            sig = sigma_rows(C, V[u])
            okp = np.all(racc == 0) and np.all(zacc % L.p == sig)
            checks.append(CheckResult("CEpower", "sampled", bool(okp)))
            s = add[u, w]
            comm = (T[u, w] - T[w, u] - T[s, neg[s]] + T[neg[s], s]) % L.p
            okc = np.all(comm == chi_rows(C, V[u], V[w]))
            checks.append(CheckResult("CEcommute", "sampled", bool(okc)))
            wt = add[w, t]
            uw = add[u, w]
            s3 = add[u, wt]
            za = T[w, t] + T[u, wt]
            zb = T[u, w] + T[uw, t]
            assoc = (zb - za - T[s3, neg[s3]] + T[neg[s3], s3]) % L.p
            oka = np.all(assoc == alpha_rows(C, V[u], V[w], V[t]))
            checks.append(CheckResult("CEassociate", "sampled", bool(oka)))
        else:
            ok = True
            for t in range(min(samples, 2000)):
                a = L.element(int(zlift[0][t]), V[idx[0][t]].tolist())
                b = L.element(int(zlift[1][t]), V[idx[1][t]].tolist())
                c = L.element(int(zlift[2][t]), V[idx[2][t]].tolist())
                if L.pow(a, L.p) != L.element(sigma_rows(C, V[idx[0][t]][None])[0], [0] * L.k):
                    ok = False
                    break
                if L.commutator(a, b) != L.element(
                        chi_rows(C, V[idx[0][t]][None], V[idx[1][t]][None])[0], [0] * L.k):
                    ok = False
                    break
                if L.associator(a, b, c) != L.element(
                        alpha_rows(C, V[idx[0][t]][None], V[idx[1][t]][None],
                                   V[idx[2][t]][None])[0], [0] * L.k):
                    ok = False
                    break
            checks.append(CheckResult("CE laws (elementwise)", "sampled", ok))

    return ValidationReport(all(c.ok for c in checks), checks)


def _first_bad_vec(L, badmask):
    if not badmask.any():
        return None
    i = int(np.flatnonzero(badmask)[0])
    return (fp_vector(L.unrank(i), L.zmod),)


def _witness2(L, bad):
    if not bad.any():
        return None
    i, j = np.argwhere(bad)[0]
    return (fp_vector(L.unrank(int(i)), L.zmod), fp_vector(L.unrank(int(j)), L.zmod))


def _witness3(L, bad, sl):
    if not bad.any():
        return None
    i, j, t = np.argwhere(bad)[0]
    return (fp_vector(L.unrank(int(i) + sl.start), L.zmod),
            fp_vector(L.unrank(int(j)), L.zmod),
            fp_vector(L.unrank(int(t)), L.zmod))


def moufang_sampled(L: CentralExtensionLoop, ntriples: int, seed: int = 0):
    """Check the four Moufang identities on seeded random element triples.

    Returns (ok, witness_or_None).  Uses the theta table; elements are
    sampled with random central lifts.
    """
    T = L.theta_table().astype(np.int64)
    add = _add_rank_table(L.moduli)
    n = L.csize
    zm = L.zmod
    rng = np.random.default_rng(seed)
    ga, de, ep = (rng.integers(0, n, size=ntriples) for _ in range(3))
    zg, zd, ze = (rng.integers(0, zm, size=ntriples) for _ in range(3))

    def mul(x, y):
        (zx, rx), (zy, ry) = x, y
        return ((zx + zy + T[rx, ry]) % zm, add[rx, ry])

    g, d, e = (zg, ga), (zd, de), (ze, ep)
    checks = [
        (mul(mul(mul(d, g), e), g), mul(d, mul(g, mul(e, g)))),   # ((dg)e)g = d(g(eg))
        (mul(mul(mul(g, d), g), e), mul(g, mul(d, mul(g, e)))),   # ((gd)g)e = g(d(ge))
        (mul(mul(g, mul(d, e)), g), mul(mul(g, d), mul(e, g))),   # (g(de))g = (gd)(eg)
        (mul(mul(g, d), mul(e, g)), mul(g, mul(mul(d, e), g))),   # (gd)(eg) = g((de)g)
    ]
    for which, (lhs, rhs) in enumerate(checks):
        bad = (lhs[0] != rhs[0]) | (lhs[1] != rhs[1])
        if bad.any():
            t = int(np.flatnonzero(bad)[0])
            wit = (which + 1,
                   L.element(int(zg[t]), L.unrank(int(ga[t]))),
                   L.element(int(zd[t]), L.unrank(int(de[t]))),
                   L.element(int(ze[t]), L.unrank(int(ep[t]))))
            return False, wit
    return True, None


def center_vectors(L: CodedLoop) -> list:
    """Vector parts c with chi(c,.) = 0 and alpha(c,.,.) = 0; the center of
    the loop is Z x (these cosets).  Works at Parker-loop scale: the chi
    rows kill almost every candidate before any alpha work."""
    from .cvs import chi_table

    C = L.cvs
    n = L.csize
    CH = chi_table(C)
    cand = np.flatnonzero(~np.any(CH, axis=1))
    V = vector_table(L.moduli)
    out = []
    for c in cand:
        # exhaustive alpha check for the survivors
        Bc = np.einsum("i,ijl->jl", V[c], C.alpha_tensor) % C.p
        vals = (V @ Bc) @ V.T
        if not (vals % C.p).any():
            out.append(tuple(V[c].tolist()))
    return out


# -- Cayley table CSV ---------------------------------------------------------

def emit_cayley_csv(L: CentralExtensionLoop) -> str:
    """Header n=<order>,p=<p>,k=<k>; then n rows of indices."""
    if len(set(L.moduli)) > 1:
        raise ValueError("CSV export requires uniform slot modulus")
    p = L.moduli[0] if L.k else L.zmod
    arr = L.table_array()
    lines = ["n=%d,p=%d,k=%d" % (L.order, p, L.k)]
    for row in arr:
        lines.append(",".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_cayley_csv(text: str):
    """Returns (table ndarray, meta dict with n, p, k)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty table file")
    meta = {}
    for part in lines[0].split(","):
        if "=" not in part:
            raise ValueError("bad header %r (expected n=..,p=..,k=..)" % lines[0])
        key, val = part.split("=", 1)
        try:
            meta[key.strip()] = int(val)
        except ValueError:
            raise ValueError("bad header value %r" % part) from None
    if set(meta) != {"n", "p", "k"}:
        raise ValueError("header must define exactly n, p, k")
    n = meta["n"]
    if len(lines) != n + 1:
        raise ValueError("expected %d table rows, found %d" % (n, len(lines) - 1))
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        vals = [int(x) for x in ln.split(",")]
        if len(vals) != n:
            raise ValueError("line %d: expected %d entries" % (lineno, n))
        if any(not 0 <= v < n for v in vals):
            raise ValueError("line %d: index out of range" % lineno)
        rows.append(vals)
    return np.array(rows, dtype=np.int64), meta
