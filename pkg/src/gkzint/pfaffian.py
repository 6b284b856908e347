"""Pfaffian systems d_i Y = P_i Y for a chosen twisted-cohomology basis.

The coefficient matrices are obtained by normal-form division: write the basis
classes and their derivatives over the standard monomials, then P_i = P'(P'')^{-1}.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cayley import CayleyConfig
from .config import DEFAULT
from .context import SymbolContext
from .contiguity import (assemble_F, decompose_form_index,
                         decomposition_candidates, direction_contiguity,
                         DegenerateDecompositionError, FormIndex)
from .errors import NotABasisError
from .groebner import gkz_groebner, normal_form, standard_monomials
from .ratmat import RatFunMatrix
from .weyl import WeylOperator, weyl_mul


class GkzSystem:
    """Shared immutable computation cache for one configuration: Groebner basis,
    standard monomials, per-direction contiguity operators, class realizations."""

    def __init__(self, cay, ctx=None, cfg=None):
        self.cay = cay
        self.cfg = cfg or DEFAULT
        self.ctx = ctx or SymbolContext(cay.d, cay.N)
        self._gb = None
        self._stdmons = None
        self._toric_cache = {}
        self._contigs = {}
        self._realized = {}

    @property
    def gb(self):
        if self._gb is None:
            self._gb = gkz_groebner(self.cay, self.ctx,
                                    step_limit=self.cfg.buchberger_step_limit)
        return self._gb

    @property
    def stdmons(self):
        if self._stdmons is None:
            self._stdmons = standard_monomials(self.gb)
        return self._stdmons

    @property
    def rank(self):
        return len(self.stdmons)

    def contiguity(self, i):
        if i not in self._contigs:
            self._contigs[i] = direction_contiguity(
                self.cay, self.ctx, i, self.gb, self._toric_cache,
                max_ansatz_degree=self.cfg.contiguity_degree)
        return self._contigs[i]

    def form_index(self, q_prime, q_doubleprime):
        return decompose_form_index(self.cay, q_prime, q_doubleprime)

    def realize(self, form):
        """Composite operator and scalar prefactor for one basis class; retries
        alternative decompositions on degenerate prefactors."""
        key = (form.q_prime, form.q_doubleprime, form.r)
        if key not in self._realized:
            candidates = [form]
            try:
                op, pref = self._realize_one(form)
            except DegenerateDecompositionError:
                op = None
                for alt in decomposition_candidates(self.cay, form.q_prime,
                                                    form.q_doubleprime):
                    if alt.r == form.r:
                        continue
                    try:
                        op, pref = self._realize_one(alt)
                        form = alt
                        break
                    except DegenerateDecompositionError:
                        continue
                if op is None:
                    raise
            self._realized[key] = (form, op, pref)
        return self._realized[key]

    def _realize_one(self, form):
        contigs = {}
        for j in range(self.cay.N):
            if form.r[j] < 0:
                contigs[j] = self.contiguity(j)
        return assemble_F(self.cay, self.ctx, form, contigs)

    def nf_vector(self, op, prefactor=None):
        nf = normal_form(op, self.gb)
        vec = self.stdmons.vector(nf, self.ctx)
        if prefactor is not None:
            vec = [c * prefactor for c in vec]
        return vec


@dataclass
class PfaffianSystem:
    """All direction matrices P_i and the dual system (parameters negated)."""

    cayley: CayleyConfig
    basis: tuple                 # FormIndex tuple
    standard_monomials: tuple
    matrices: dict               # 0-based direction -> RatFunMatrix
    dual_matrices: dict = field(default=None)
    beta_convention: str = "H_A(beta), delta = -beta"

    @property
    def size(self):
        return len(self.basis)

    def omega(self, i):
        """Connection matrix in direction i: transpose of P_i."""
        return self.matrices[i].transpose()

    def omega_dual(self, i):
        return self.dual_matrices[i].transpose()


def _basis_nf(system, forms):
    """Rows of NF(F(Q)) over the standard monomials, with prefactors folded in."""
    rows = []
    realized = []
    for f in forms:
        f2, op, pref = system.realize(f)
        realized.append((f2, op, pref))
        rows.append(system.nf_vector(op, pref))
    return realized, rows


def pfaffian_matrix(cay_or_system, basis, i, specialize=None):
    """P_i for the given basis classes (FormIndex or (q', q'') pairs); direction
    i is 0-based.  `specialize` optionally substitutes rational values for some
    z variables after the symbolic computation."""
    system = cay_or_system if isinstance(cay_or_system, GkzSystem) \
        else GkzSystem(cay_or_system)
    forms = [f if isinstance(f, FormIndex) else system.form_index(*f) for f in basis]
    realized, ppp_rows = _basis_nf(system, forms)
    ctx = system.ctx
    ppp = RatFunMatrix(ctx, ppp_rows)
    di = WeylOperator.partial(ctx, i)
    pp_rows = [system.nf_vector(weyl_mul(di, op), pref)
               for (_, op, pref) in realized]
    pp = RatFunMatrix(ctx, pp_rows)
    if specialize is not None:
        ppp = ppp.subs_z(specialize)
        pp = pp.subs_z(specialize)
    try:
        inv = ppp.inverse()
    except NotABasisError:
        raise NotABasisError(
            "the proposed classes are not a basis (coefficient matrix singular)")
    return pp * inv


def full_pfaffian(cay_or_system, basis, directions=None, specialize=None,
                  with_dual=True, workers=None):
    """PfaffianSystem with P_i for all requested directions plus the dual
    system obtained by negating the parameters."""
    system = cay_or_system if isinstance(cay_or_system, GkzSystem) \
        else GkzSystem(cay_or_system)
    ctx = system.ctx
    forms = [f if isinstance(f, FormIndex) else system.form_index(*f) for f in basis]
    realized, ppp_rows = _basis_nf(system, forms)
    ppp = RatFunMatrix(ctx, ppp_rows)
    if specialize is not None:
        ppp = ppp.subs_z(specialize)
    try:
        inv = ppp.inverse()
    except NotABasisError:
        raise NotABasisError(
            "the proposed classes are not a basis (coefficient matrix singular)")
    directions = list(range(system.cay.N)) if directions is None else list(directions)

    def one_direction(i):
        di = WeylOperator.partial(ctx, i)
        rows = [system.nf_vector(weyl_mul(di, op), pref)
                for (_, op, pref) in realized]
        pp = RatFunMatrix(ctx, rows)
        if specialize is not None:
            pp = pp.subs_z(specialize)
        return i, pp * inv

    nworkers = workers if workers is not None else system.cfg.workers
    if nworkers > 1 and len(directions) > 1:
        with ThreadPoolExecutor(max_workers=nworkers) as ex:
            results = dict(ex.map(one_direction, directions))
    else:
        results = dict(one_direction(i) for i in directions)
    dual = None
    if with_dual:
        dual = {i: m.negate_params() for i, m in results.items()}
    return PfaffianSystem(
        cayley=system.cay,
        basis=tuple(f for (f, _, _) in realized),
        standard_monomials=tuple(system.stdmons.monomials),
        matrices=results,
        dual_matrices=dual,
    )


def integrability_residual(psys, i, j):
    """d_i P_j + P_j P_i - d_j P_i - P_i P_j; zero iff the pair is compatible."""
    Pi, Pj = psys.matrices[i], psys.matrices[j]
    return (Pj.diff_z(i) + Pj * Pi) - (Pi.diff_z(j) + Pi * Pj)


def integrability_check(psys):
    """Exact pairwise compatibility of the full system."""
    dirs = sorted(psys.matrices)
    for a in range(len(dirs)):
        for b in range(a):
            if not integrability_residual(psys, dirs[a], dirs[b]).is_zero():
                return False
    return True
