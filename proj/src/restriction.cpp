#include "spencer/restriction.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>

#include "spencer/characteristics.hpp"

namespace spencer {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RSubspace span_in(std::size_t ambient, const RMatrix& rows) {
    if (rows.rows() == 0) return RSubspace(ambient);
    return RSubspace::span(rows);
}

std::vector<Rational> unit(std::size_t dim, std::size_t i) {
    std::vector<Rational> v(dim);
    v[i] = 1;
    return v;
}

// Coordinate covector e_var as a span for multiply_by_covector.
std::vector<Rational> coordinate(int n, int var) { return unit(static_cast<std::size_t>(n), static_cast<std::size_t>(var)); }

// Rows x^α ⊗ e_μ ⊗ dx_I for monomials α supported on `sym_vars`, I ⊂ `form_vars`.
RMatrix monomial_rows(int n, int nu, int k, int j, VarMask sym_vars, VarMask form_vars) {
    BasisIndexer idx({n, nu, k, j});
    RMatrix out(0, idx.dim());
    const auto& mons = monomials(n, k);
    const auto& subs = subsets(n, j);
    for (int mu = 0; mu < nu; ++mu)
        for (std::size_t a = 0; a < mons.size(); ++a) {
            bool ok = true;
            for (int v = 0; v < n; ++v)
                if (mons[a][v] > 0 && !((sym_vars >> v) & 1u)) ok = false;
            if (!ok) continue;
            for (std::size_t I = 0; I < subs.size(); ++I) {
                if ((subset_mask(subs[I]) & ~form_vars) != 0) continue;
                out.append_row(unit(idx.dim(), idx.index(mu, a, I)));
            }
        }
    return out;
}

// Multiply every row (slot (k, j)) by the monomial x^β.
RMatrix multiply_rows_by_monomial(const RMatrix& rows, int n, int nu, int k, int j, const MultiIndex& beta) {
    RMatrix cur = rows;
    int deg = k;
    for (int v = 0; v < n; ++v)
        for (int e = 0; e < beta[v]; ++e) {
            auto cv = coordinate(n, v);
            cur = apply_rows(multiply_by_covector(cv, {n, nu, deg, j}), cur);
            ++deg;
        }
    return cur;
}

std::size_t binom(long n, long k) { return binomial(n, k); }

long sdim(std::size_t x) { return static_cast<long>(x); }

}  // namespace

RMatrix AdaptedFrame::w_basis() const {
    RMatrix w(0, static_cast<std::size_t>(n));
    for (int r = 0; r < s; ++r) w.append_row(basis.row(static_cast<std::size_t>(r)));
    return w;
}

AdaptedFrame adapted_frame(const RSubspace& vstar, std::optional<std::uint64_t> seed) {
    AdaptedFrame f;
    f.n = static_cast<int>(vstar.ambient_dim());
    f.t = static_cast<int>(vstar.dim());
    f.s = f.n - f.t;
    f.vstar = vstar;
    if (f.s < 1) throw std::invalid_argument("adapted_frame: V* must be a proper subspace of T*");
    const auto w = annihilating_vectors(vstar);
    f.basis = w;
    RSubspace acc = RSubspace::span(w);
    std::mt19937_64 rng(splitmix(seed.value_or(0) ^ 0xF4A3ULL));
    std::uniform_int_distribution<int> d(-10, 10);
    std::size_t next_unit = 0;
    while (static_cast<int>(f.basis.rows()) < f.n) {
        std::vector<Rational> cand;
        if (seed) {
            cand.resize(static_cast<std::size_t>(f.n));
            for (auto& x : cand) x = d(rng);
        } else {
            cand = unit(static_cast<std::size_t>(f.n), next_unit++);
        }
        if (acc.contains(std::span<const Rational>(cand))) continue;
        f.basis.append_row(cand);
        acc = RSubspace::span(f.basis);
    }
    return f;
}

RestrictionSetup setup_restriction(const SymbolicSystem& g, const RSubspace& vstar, int cap,
                                   std::optional<std::uint64_t> seed) {
    if (vstar.ambient_dim() != static_cast<std::size_t>(g.n()))
        throw std::invalid_argument("V* must be a subspace of T*");
    RestrictionSetup r;
    r.frame = adapted_frame(vstar, seed);
    auto base = g.with_cap(cap);
    r.adapted = change_coordinates(base, r.frame.basis);
    RMatrix first(0, static_cast<std::size_t>(g.n()));
    for (int i = 0; i < r.frame.s; ++i) first.append_row(coordinate(g.n(), i));
    r.restricted = restrict_system(r.adapted, first);
    return r;
}

CohomologyTable dprime_cohomology_table(const RestrictionSetup& r, int i_max) {
    return masked_cohomology_table(r.adapted, i_max, r.frame.w_mask(), "delta' along W");
}

RSubspace upsilon_sec4(const AdaptedFrame& f, int nu, int i, int j) {
    const std::size_t amb = slot_dim({f.n, nu, i, j});
    if (i < 1 || j < 1 || j > f.s || f.t == 0) return RSubspace(amb);
    auto src = monomial_rows(f.n, nu, i, j - 1, all_vars(f.n), f.w_mask());
    auto d = apply_rows(delta_map({f.n, nu, i, j - 1}, f.w_mask()), src);
    RMatrix out(0, amb);
    for (int v = f.s; v < f.n; ++v) {
        auto cv = coordinate(f.n, v);
        auto prod = apply_rows(multiply_by_covector(cv, {f.n, nu, i - 1, j}), d);
        out = vstack(out, prod);
    }
    return span_in(amb, out);
}

RSubspace upsilon_intro(const AdaptedFrame& f, int nu, int i, int j) {
    const std::size_t amb = slot_dim({f.n, nu, i, j});
    if (i < 1 || j < 1 || j > f.s || f.t == 0) return RSubspace(amb);
    RMatrix out(0, amb);
    for (int r = 1; r <= i; ++r) {
        auto src = monomial_rows(f.n, nu, i + 1 - r, j - 1, f.w_mask(), f.w_mask());
        auto d = apply_rows(delta_map({f.n, nu, i + 1 - r, j - 1}, f.w_mask()), src);
        for (const auto& beta : monomials(f.n, r)) {
            bool in_v = true;
            for (int v = 0; v < f.s; ++v)
                if (beta[v] > 0) in_v = false;
            if (!in_v) continue;
            out = vstack(out, multiply_rows_by_monomial(d, f.n, nu, i - r, j, beta));
        }
    }
    return span_in(amb, out);
}

RSubspace theta_space(const AdaptedFrame& f, int nu, int i, int j) {
    const std::size_t amb = slot_dim({f.n, nu, i, j});
    RMatrix out(0, amb);
    BasisIndexer dst({f.n, nu, i, j});
    for (int q = 1; q <= j; ++q) {
        auto ups = upsilon_sec4(f, nu, i, q);
        if (ups.is_zero()) continue;
        BasisIndexer src({f.n, nu, i, q});
        const auto& vsets = subsets(f.n, j - q);
        for (const auto& J : vsets) {
            if ((subset_mask(J) & ~f.v_mask()) != 0) continue;
            for (std::size_t r = 0; r < ups.dim(); ++r) {
                std::vector<Rational> row(amb);
                for (std::size_t c = 0; c < src.dim(); ++c) {
                    const Rational& x = ups.basis()(r, c);
                    if (is_zero(x)) continue;
                    auto coord = src.decode(c);
                    // W indices precede V indices, so I ∪ J is already sorted.
                    std::vector<int> forms = coord.forms;
                    forms.insert(forms.end(), J.begin(), J.end());
                    row[dst.index(coord.mu, coord.alpha, forms)] += x;
                }
                out.append_row(row);
            }
        }
    }
    return span_in(amb, out);
}

RSubspace pi_space(const AdaptedFrame& f, int nu, int i, int j) {
    const std::size_t amb = slot_dim({f.n, nu, i, j});
    if (j < 1 || j > f.t) return RSubspace(amb);
    auto src = monomial_rows(f.n, nu, i + 1, j - 1, f.v_mask(), f.v_mask());
    return span_in(amb, apply_rows(delta_map({f.n, nu, i + 1, j - 1}), src));
}

RSubspace xi_space(const RestrictionSetup& r, int i, int j) {
    const auto& f = r.frame;
    const int nu = r.adapted.nu();
    const std::size_t amb = slot_dim({f.n, nu, i, j});
    if (j < 1 || j > f.s || i < 0) return RSubspace(amb);
    auto rows = level_tensor_forms(r.adapted.level(i + 1), f.n, nu, i + 1, j - 1, f.w_mask());
    auto img = span_in(amb, apply_rows(delta_map({f.n, nu, i + 1, j - 1}, f.w_mask()), rows));
    return intersect(img, upsilon_sec4(f, nu, i, j));
}

std::size_t comultiplication_rank(int t, int i, int j) {
    if (t == 0 || i < 0 || j < 0) return 0;
    const auto& top = monomials(t, i + j);
    const auto& left = monomials(t, i);
    const auto& right = monomials(t, j);
    RMatrix m(top.size(), left.size() * right.size());
    for (std::size_t a = 0; a < left.size(); ++a)
        for (std::size_t b = 0; b < right.size(); ++b) {
            MultiIndex sum(static_cast<std::size_t>(t));
            for (int v = 0; v < t; ++v) sum[v] = left[a][v] + right[b][v];
            m(monomial_rank(sum), a * right.size() + b) = 1;
        }
    return rank(m);
}

AuxSpaces aux_spaces(const RestrictionSetup& r, int i, int j) {
    const int nu = r.adapted.nu();
    AuxSpaces a;
    a.i = i;
    a.j = j;
    a.upsilon_intro = upsilon_intro(r.frame, nu, i, j).dim();
    a.upsilon_sec4 = upsilon_sec4(r.frame, nu, i, j).dim();
    a.theta = theta_space(r.frame, nu, i, j).dim();
    a.pi = pi_space(r.frame, nu, i, j).dim();
    a.xi = xi_space(r, i, j).dim();
    a.s_ij = comultiplication_rank(r.frame.t, i, j);
    return a;
}

RSubspace filtration_piece(const RestrictionSetup& r, int l, int a, int d) {
    const auto& f = r.frame;
    const int nu = r.adapted.nu();
    const int level = l - d;
    if (d < 0 || d > f.n || level < 0) return RSubspace(0);
    const VarMask vm = f.v_mask();
    auto rows = tensor_with_forms(r.adapted.level(level).basis(), f.n, nu, level, d,
                                  [vm, a](VarMask m) { return std::popcount(m & vm) >= a; });
    return span_in(slot_dim({f.n, nu, level, d}), rows);
}

RSubspace spectral_cocycles(const RestrictionSetup& r, int l, int rr, int p, int q) {
    const auto& f = r.frame;
    const int nu = r.adapted.nu();
    const int d = p + q;
    auto piece = filtration_piece(r, l, p, d);
    const int level = l - d;
    if (piece.is_zero() || level < 1 || d + 1 > f.n) return piece;
    // coordinates of slot (level-1, d+1) whose form has fewer than p + rr V-indices
    BasisIndexer tgt({f.n, nu, level - 1, d + 1});
    const auto& subs = subsets(f.n, d + 1);
    const VarMask vm = f.v_mask();
    RMatrix functionals(0, tgt.dim());
    for (std::size_t c = 0; c < tgt.dim(); ++c) {
        std::size_t I = c % tgt.ext_count();
        if (std::popcount(subset_mask(subs[I]) & vm) < p + rr) functionals.append_row(unit(tgt.dim(), c));
    }
    if (functionals.rows() == 0) return piece;
    const auto& delta = delta_map({f.n, nu, level, d});
    RMatrix pulled(0, delta.cols());
    for (std::size_t k = 0; k < functionals.rows(); ++k) pulled.append_row(delta.pullback(functionals.row(k)));
    return kernel_on(pulled, piece);
}

RSubspace spectral_coboundaries(const RestrictionSetup& r, int l, int rr, int p, int q) {
    const auto& f = r.frame;
    const int nu = r.adapted.nu();
    const int d = p + q;
    auto piece = filtration_piece(r, l, p, d);
    if (piece.ambient_dim() == 0 || piece.is_zero()) return piece;
    auto src = filtration_piece(r, l, p - rr, d - 1);
    if (src.ambient_dim() == 0 || src.is_zero()) return RSubspace(piece.ambient_dim());
    auto img = image(delta_map({f.n, nu, l - d + 1, d - 1}), src);
    return intersect(img, piece);
}

std::size_t spectral_term(const RestrictionSetup& r, int l, int rr, int p, int q) {
    auto z = spectral_cocycles(r, l, rr, p, q);
    if (z.ambient_dim() == 0 || z.is_zero()) return 0;
    auto lower = spectral_cocycles(r, l, rr - 1, p + 1, q - 1);
    auto b = spectral_coboundaries(r, l, rr - 1, p, q);
    RSubspace acc = b;
    if (lower.ambient_dim() == z.ambient_dim()) acc = sum(acc, lower);
    return z.dim() - acc.dim();
}

std::size_t spectral_differential_rank(const RestrictionSetup& r, int l, int rr, int p, int q) {
    auto z = spectral_cocycles(r, l, rr, p, q);
    if (z.ambient_dim() == 0 || z.is_zero()) return 0;
    auto next = spectral_cocycles(r, l, rr + 1, p, q);
    auto lower = spectral_cocycles(r, l, rr - 1, p + 1, q - 1);
    RSubspace acc = next;
    if (lower.ambient_dim() == z.ambient_dim()) acc = sum(acc, lower);
    return z.dim() - acc.dim();
}

std::string HypothesisStatus::failing() const {
    if (!strongly_nonchar) return "V* is not strongly non-characteristic";
    if (!involutive) return involutivity_decided ? "g is not involutive" : "involutivity of g undecided";
    return "";
}

namespace {

HypothesisStatus hypotheses(const SymbolicSystem& g, const RSubspace& vstar, std::uint64_t seed) {
    HypothesisStatus h;
    h.strongly_nonchar = char_report(g, vstar).strongly_nonchar;
    auto inv = is_involutive(g, seed);
    h.involutive = inv.involutive;
    h.involutivity_decided = inv.decided;
    return h;
}

}  // namespace

Thm1Report verify_thm1(const SymbolicSystem& g, const RSubspace& vstar, std::uint64_t seed, std::optional<int> i_max) {
    Thm1Report rep;
    rep.hypotheses = hypotheses(g, vstar, seed);
    rep.i_max = i_max.value_or(g.cap() - 1);
    auto setup = setup_restriction(g, vstar, std::max(g.cap(), rep.i_max + 1));
    rep.s = setup.frame.s;
    rep.t = setup.frame.t;
    rep.r_min = order_profile(g).r_min();
    try {
        rep.restricted_involutive = is_involutive(setup.restricted, seed).involutive;
    } catch (const CapExceeded&) {
        rep.restricted_involutive = false;
    }
    const int n = g.n(), nu = g.nu(), t = rep.t;
    auto hg = cohomology_table(setup.adapted, rep.i_max);
    auto ht = cohomology_table(setup.restricted, rep.i_max);
    for (int i = 0; i <= rep.i_max; ++i)
        for (int j = 0; j <= n; ++j) {
            Thm1Cell c{i, j, hg.dim(i, j), 0};
            std::size_t rhs = 0;
            for (int q = 1; q <= j; ++q) rhs += ht.dim(i, q) * binom(t, j - q);
            if (i + 1 == rep.r_min)
                rhs += theta_space(setup.frame, nu, i, j).dim() + pi_space(setup.frame, nu, i, j).dim();
            if (i == 0 && j == 0) rhs += ht.dim(0, 0);
            c.rhs = rhs;
            if (!c.match()) ++rep.mismatches;
            rep.cells.push_back(c);
        }
    return rep;
}

CorollaryReport corollary_euler_check(const SymbolicSystem& g, const RSubspace& vstar, std::uint64_t seed,
                                      std::optional<int> i_max) {
    CorollaryReport rep;
    rep.hypotheses = hypotheses(g, vstar, seed);
    const int top = i_max.value_or(g.cap() - 1);
    auto setup = setup_restriction(g, vstar, std::max(g.cap(), top + 1));
    const int n = g.n(), nu = g.nu(), t = setup.frame.t;
    const int r_min = order_profile(g).r_min();
    auto hg = cohomology_table(setup.adapted, top);
    auto ht = cohomology_table(setup.restricted, top);
    for (int i = std::max(0, r_min - 1); i <= top; ++i)
        for (int j = 1; j <= n; ++j) {
            EulerCheck e;
            e.i = i;
            e.j = j;
            const bool edge = i + 1 == r_min;
            e.terms.push_back(edge ? static_cast<long>(comultiplication_rank(t, j, i) * static_cast<std::size_t>(nu)) : 0);
            for (int a = 1; a <= j; ++a) e.terms.push_back(static_cast<long>(sym_dim(t, j - a) * hg.dim(i, a)));
            long last = static_cast<long>(ht.dim(i, j));
            if (edge) last += static_cast<long>(upsilon_sec4(setup.frame, nu, i, j).dim());
            e.terms.push_back(last);
            for (std::size_t a = 0; a < e.terms.size(); ++a) e.alternating_sum += (a % 2 == 0 ? 1 : -1) * e.terms[a];
            if (!e.holds()) ++rep.failures;
            rep.checks.push_back(std::move(e));
        }
    return rep;
}

Lemma5Report lemma5_check(const SymbolicSystem& g, const RSubspace& vstar, std::optional<int> i_max) {
    Lemma5Report rep;
    rep.strongly_nonchar = char_report(g, vstar).strongly_nonchar;
    auto ord = order_profile(g);
    rep.k = ord.orders.empty() ? 1 : ord.r_min();
    const int k = rep.k;
    const int top = i_max.value_or(g.cap() - 1);
    auto setup = setup_restriction(g, vstar, std::max(g.cap(), top + 1));
    const int nu = g.nu(), t = setup.frame.t, s = setup.frame.s;
    auto hd = dprime_cohomology_table(setup, top);
    auto ht = cohomology_table(setup.restricted, top);
    for (int i = 0; i <= top; ++i)
        for (int j = 0; j <= s; ++j) {
            Lemma5Cell c;
            c.i = i;
            c.j = j;
            c.dprime = sdim(hd.dim(i, j));
            if (i < k - 1 && j > 0) {
                c.case_name = "i<k-1,j>0";
                c.predicted = 0;
            } else if (i <= k - 1 && j == 0) {
                c.case_name = "i<=k-1,j=0";
                c.predicted = sdim(sym_dim(t, i)) * nu;
            } else if (i == k - 1) {
                c.case_name = "i=k-1";
                c.predicted = sdim(ht.dim(i, j)) + sdim(upsilon_sec4(setup.frame, nu, i, j).dim()) - sdim(xi_space(setup, i, j).dim());
            } else if (i == k) {
                c.case_name = "i=k";
                c.predicted = sdim(ht.dim(i, j)) - sdim(xi_space(setup, k - 1, j + 1).dim());
            } else {
                c.case_name = "i>k";
                c.predicted = sdim(ht.dim(i, j));
            }
            if (!c.match()) ++rep.mismatches;
            rep.cells.push_back(std::move(c));
        }
    return rep;
}

AcyclicityTransfer acyclicity_transfer(const SymbolicSystem& g, const RSubspace& vstar, int m, std::optional<int> i_max) {
    AcyclicityTransfer rep;
    rep.m = m;
    rep.strongly_nonchar = char_report(g, vstar).strongly_nonchar;
    auto ord = order_profile(g);
    rep.pure_order = ord.orders.size() == 1;
    const int top = i_max.value_or(g.cap() - 1);
    auto setup = setup_restriction(g, vstar, std::max(g.cap(), top + 1));
    auto hg = cohomology_table(setup.adapted, top);
    auto ht = cohomology_table(setup.restricted, top);
    rep.original = acyclicity(hg, ord, m, false);
    rep.restricted = acyclicity(ht, order_profile(setup.restricted), m, false);
    rep.restricted_fixed = acyclicity(ht, ord, m, false);
    return rep;
}

}  // namespace spencer
