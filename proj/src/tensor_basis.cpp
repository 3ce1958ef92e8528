#include "spencer/tensor_basis.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace spencer {

int degree(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

std::size_t binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (long i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

std::size_t sym_dim(int n, int k) {
    if (k < 0) return 0;
    if (n == 0) return k == 0 ? 1 : 0;
    return binomial(n + k - 1, k);
}

std::size_t ext_dim(int n, int j) { return binomial(n, j); }

namespace {

struct MonomialTable {
    std::vector<MultiIndex> list;
    std::unordered_map<std::uint64_t, std::size_t> rank;
};

std::uint64_t encode(const MultiIndex& alpha) {
    // Base-64 digits; exponents stay far below 64 at desk scale.
    std::uint64_t key = 0;
    for (auto it = alpha.rbegin(); it != alpha.rend(); ++it) key = key * 64 + static_cast<std::uint64_t>(*it);
    return key * 16 + alpha.size();
}

void enumerate(int n, int k, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (pos == n - 1) {
        cur[pos] = k;
        out.push_back(cur);
        return;
    }
    for (int e = 0; e <= k; ++e) {
        cur[pos] = e;
        enumerate(n, k - e, pos + 1, cur, out);
    }
}

bool colex_less(const MultiIndex& a, const MultiIndex& b) {
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

struct SubsetTable {
    std::vector<std::vector<int>> list;
    std::vector<std::size_t> rank_of_mask;
};

std::mutex table_mutex;

}  // namespace

const std::vector<MultiIndex>& monomials(int n, int k) {
    static std::map<std::pair<int, int>, std::unique_ptr<MonomialTable>> cache;
    std::lock_guard lock(table_mutex);
    auto& slot = cache[{n, k}];
    if (!slot) {
        slot = std::make_unique<MonomialTable>();
        if (k >= 0 && n > 0) {
            MultiIndex cur(n);
            enumerate(n, k, 0, cur, slot->list);
            std::sort(slot->list.begin(), slot->list.end(), colex_less);
        } else if (k == 0 && n == 0) {
            slot->list.emplace_back();
        }
        for (std::size_t i = 0; i < slot->list.size(); ++i) slot->rank[encode(slot->list[i])] = i;
    }
    return slot->list;
}

std::size_t monomial_rank(const MultiIndex& alpha) {
    // Colex rank by counting: monomials β of the same degree with β <colex α.
    // Direct formula avoids a locked table lookup in hot loops.
    const int n = static_cast<int>(alpha.size());
    std::size_t rank = 0;
    int remaining = degree(alpha);
    // Walk from the last coordinate: all β agreeing on coordinates > i and with
    // β_i < α_i come first; their earlier coordinates sum to remaining - β_i.
    for (int i = n - 1; i >= 1; --i) {
        for (int b = 0; b < alpha[i]; ++b) rank += sym_dim(i, remaining - b);
        remaining -= alpha[i];
    }
    return rank;
}

const std::vector<std::vector<int>>& subsets(int n, int j) {
    static std::map<std::pair<int, int>, std::unique_ptr<SubsetTable>> cache;
    std::lock_guard lock(table_mutex);
    auto& slot = cache[{n, j}];
    if (!slot) {
        slot = std::make_unique<SubsetTable>();
        slot->rank_of_mask.assign(std::size_t{1} << n, 0);
        if (j >= 0 && j <= n) {
            std::vector<int> cur;
            // lexicographic enumeration of combinations
            std::vector<int> idx(j);
            std::iota(idx.begin(), idx.end(), 0);
            while (true) {
                slot->list.push_back(idx);
                int p = j - 1;
                while (p >= 0 && idx[p] == n - j + p) --p;
                if (p < 0) break;
                ++idx[p];
                for (int q = p + 1; q < j; ++q) idx[q] = idx[q - 1] + 1;
            }
        }
        for (std::size_t r = 0; r < slot->list.size(); ++r) slot->rank_of_mask[subset_mask(slot->list[r])] = r;
    }
    return slot->list;
}

VarMask subset_mask(const std::vector<int>& subset) {
    VarMask m = 0;
    for (int i : subset) m |= VarMask{1} << i;
    return m;
}

std::size_t subset_rank(int n, const std::vector<int>& sorted_subset) {
    // Lex rank of a combination.
    const int j = static_cast<int>(sorted_subset.size());
    std::size_t rank = 0;
    int prev = -1;
    for (int p = 0; p < j; ++p) {
        for (int v = prev + 1; v < sorted_subset[p]; ++v) rank += binomial(n - 1 - v, j - 1 - p);
        prev = sorted_subset[p];
    }
    return rank;
}

std::size_t slot_dim(const GradedSlot& s) {
    if (s.k < 0 || s.j < 0 || s.j > s.n) return 0;
    return static_cast<std::size_t>(s.nu) * sym_dim(s.n, s.k) * ext_dim(s.n, s.j);
}

BasisIndexer::BasisIndexer(GradedSlot slot)
    : slot_(slot), sym_(sym_dim(slot.n, slot.k)), ext_(ext_dim(slot.n, slot.j)), dim_(slot_dim(slot)) {
    if (slot.k < 0 || slot.j < 0 || slot.j > slot.n) sym_ = ext_ = 0;
}

std::size_t BasisIndexer::index(int mu, const MultiIndex& alpha, const std::vector<int>& forms) const {
    return index(mu, monomial_rank(alpha), subset_rank(slot_.n, forms));
}

BasisIndexer::Coordinate BasisIndexer::decode(std::size_t flat) const {
    if (flat >= dim_) throw std::out_of_range("BasisIndexer::decode");
    std::size_t mu = flat / (sym_ * ext_);
    std::size_t rest = flat % (sym_ * ext_);
    return {static_cast<int>(mu), monomials(slot_.n, slot_.k)[rest / ext_], subsets(slot_.n, slot_.j)[rest % ext_]};
}

namespace {

using MapKey = std::tuple<int, int, int, int, VarMask, int>;
std::mutex map_mutex;
std::map<MapKey, std::unique_ptr<LinearMap<Rational>>> map_cache;

LinearMap<Rational> build_delta(const GradedSlot& s, VarMask mask) {
    GradedSlot t{s.n, s.nu, s.k - 1, s.j + 1};
    BasisIndexer src(s);
    BasisIndexer dst(t);
    LinearMap<Rational> m(dst.dim(), src.dim());
    if (src.dim() == 0 || dst.dim() == 0) return m;
    const auto& mons = monomials(s.n, s.k);
    const auto& subs = subsets(s.n, s.j);
    MultiIndex lower(s.n);
    std::vector<int> merged;
    for (int mu = 0; mu < s.nu; ++mu)
        for (std::size_t a = 0; a < mons.size(); ++a)
            for (std::size_t I = 0; I < subs.size(); ++I) {
                const auto& alpha = mons[a];
                const auto& forms = subs[I];
                for (int i = 0; i < s.n; ++i) {
                    if (!(mask >> i & 1U) || alpha[i] == 0) continue;
                    if (std::find(forms.begin(), forms.end(), i) != forms.end()) continue;
                    int below = 0;
                    for (int l : forms)
                        if (l < i) ++below;
                    lower = alpha;
                    --lower[i];
                    merged = forms;
                    merged.insert(std::upper_bound(merged.begin(), merged.end(), i), i);
                    Rational coef = alpha[i];
                    if (below % 2) coef = -coef;
                    m.add(dst.index(mu, monomial_rank(lower), subset_rank(s.n, merged)),
                          src.index(mu, a, I), coef);
                }
            }
    return m;
}

LinearMap<Rational> build_partial(int var, const GradedSlot& s) {
    GradedSlot t{s.n, s.nu, s.k - 1, s.j};
    BasisIndexer src(s);
    BasisIndexer dst(t);
    LinearMap<Rational> m(dst.dim(), src.dim());
    if (src.dim() == 0 || dst.dim() == 0) return m;
    const auto& mons = monomials(s.n, s.k);
    MultiIndex lower(s.n);
    for (int mu = 0; mu < s.nu; ++mu)
        for (std::size_t a = 0; a < mons.size(); ++a) {
            if (mons[a][var] == 0) continue;
            lower = mons[a];
            --lower[var];
            std::size_t la = monomial_rank(lower);
            for (std::size_t I = 0; I < src.ext_count(); ++I)
                m.add(dst.index(mu, la, I), src.index(mu, a, I), Rational(mons[a][var]));
        }
    return m;
}

const LinearMap<Rational>& cached(const MapKey& key, auto build) {
    {
        std::lock_guard lock(map_mutex);
        auto it = map_cache.find(key);
        if (it != map_cache.end()) return *it->second;
    }
    auto built = std::make_unique<LinearMap<Rational>>(build());
    std::lock_guard lock(map_mutex);
    auto [it, inserted] = map_cache.emplace(key, std::move(built));
    return *it->second;
}

}  // namespace

const LinearMap<Rational>& delta_map(const GradedSlot& s, VarMask mask) {
    mask &= all_vars(s.n);
    return cached({s.n, s.nu, s.k, s.j, mask, 0}, [&] { return build_delta(s, mask); });
}

Matrix<Rational> delta_matrix(const GradedSlot& s) { return delta_map(s).to_dense(); }

const LinearMap<Rational>& partial_derivative(int var, const GradedSlot& s) {
    if (var < 0 || var >= s.n) throw std::out_of_range("partial_derivative: variable index");
    return cached({s.n, s.nu, s.k, s.j, static_cast<VarMask>(var), 1}, [&] { return build_partial(var, s); });
}

LinearMap<Rational> directional_derivative(std::span<const Rational> v, const GradedSlot& s) {
    if (static_cast<int>(v.size()) != s.n) throw std::invalid_argument("directional_derivative: dimension");
    LinearMap<Rational> out(slot_dim({s.n, s.nu, s.k - 1, s.j}), slot_dim(s));
    for (int i = 0; i < s.n; ++i) {
        if (is_zero(v[i])) continue;
        const auto& d = partial_derivative(i, s);
        for (std::size_t c = 0; c < d.cols(); ++c)
            for (const auto& [t, val] : d.column(c)) out.add(t, c, v[i] * val);
    }
    return out;
}

LinearMap<Rational> multiply_by_covector(std::span<const Rational> covector, const GradedSlot& s) {
    GradedSlot t{s.n, s.nu, s.k + 1, s.j};
    BasisIndexer src(s);
    BasisIndexer dst(t);
    LinearMap<Rational> m(dst.dim(), src.dim());
    const auto& mons = monomials(s.n, s.k);
    MultiIndex up(s.n);
    for (int mu = 0; mu < s.nu; ++mu)
        for (std::size_t a = 0; a < mons.size(); ++a)
            for (int i = 0; i < s.n; ++i) {
                if (is_zero(covector[i])) continue;
                up = mons[a];
                ++up[i];
                std::size_t ua = monomial_rank(up);
                for (std::size_t I = 0; I < src.ext_count(); ++I)
                    m.add(dst.index(mu, ua, I), src.index(mu, a, I), covector[i]);
            }
    return m;
}

namespace {

Rational determinant(Matrix<Rational> m) {
    const std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && is_zero(m(p, c))) ++p;
        if (p == n) return 0;
        if (p != c) {
            m.swap_rows(p, c);
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (is_zero(m(r, c))) continue;
            Rational f = m(r, c) / m(c, c);
            for (std::size_t cc = c; cc < n; ++cc) m(r, cc) -= f * m(c, cc);
        }
    }
    return det;
}

}  // namespace

LinearMap<Rational> restriction_map(const Matrix<Rational>& w_basis, const GradedSlot& s) {
    const int n = s.n;
    const int sdim = static_cast<int>(w_basis.rows());
    if (static_cast<int>(w_basis.cols()) != n) throw std::invalid_argument("restriction_map: vectors must live in T");
    if (rank(w_basis) != w_basis.rows()) throw std::invalid_argument("restriction_map: dependent basis of W");
    GradedSlot t{sdim, s.nu, s.k, s.j};
    BasisIndexer src(s);
    BasisIndexer dst(t);
    LinearMap<Rational> out(dst.dim(), src.dim());
    if (src.dim() == 0 || dst.dim() == 0) return out;

    // x_i restricted to W is the linear form t ↦ Σ_m (w_m)_i t_m.
    std::vector<std::vector<Rational>> linear(n, std::vector<Rational>(sdim));
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < sdim; ++m) linear[i][m] = w_basis(m, i);
    // powers[i][e] = (x_i|_W)^e
    std::vector<std::vector<std::vector<Rational>>> powers(n);
    for (int i = 0; i < n; ++i) {
        powers[i].push_back({Rational(1)});
        for (int e = 1; e <= s.k; ++e)
            powers[i].push_back(sym_multiply<Rational>(sdim, powers[i].back(), e - 1, linear[i], 1));
    }
    const auto& mons = monomials(n, s.k);
    std::vector<std::vector<Rational>> images(mons.size());
    for (std::size_t a = 0; a < mons.size(); ++a) {
        std::vector<Rational> acc{Rational(1)};
        int deg = 0;
        for (int i = 0; i < n; ++i) {
            int e = mons[a][i];
            if (e == 0) continue;
            acc = sym_multiply<Rational>(sdim, acc, deg, powers[i][e], e);
            deg += e;
        }
        images[a] = std::move(acc);
    }
    // dx_I restricted: Σ_J det(w_{J_b}(I_a)) dt_J
    const auto& src_forms = subsets(n, s.j);
    const auto& dst_forms = subsets(sdim, s.j);
    std::vector<std::vector<Rational>> minors(src_forms.size(), std::vector<Rational>(dst_forms.size()));
    for (std::size_t I = 0; I < src_forms.size(); ++I)
        for (std::size_t J = 0; J < dst_forms.size(); ++J) {
            Matrix<Rational> sub(s.j, s.j);
            for (int a = 0; a < s.j; ++a)
                for (int b = 0; b < s.j; ++b) sub(a, b) = w_basis(dst_forms[J][b], src_forms[I][a]);
            minors[I][J] = s.j == 0 ? Rational(1) : determinant(sub);
        }
    for (int mu = 0; mu < s.nu; ++mu)
        for (std::size_t a = 0; a < mons.size(); ++a)
            for (std::size_t I = 0; I < src_forms.size(); ++I)
                for (std::size_t b = 0; b < images[a].size(); ++b) {
                    if (is_zero(images[a][b])) continue;
                    for (std::size_t J = 0; J < dst_forms.size(); ++J) {
                        if (is_zero(minors[I][J])) continue;
                        out.add(dst.index(mu, b, J), src.index(mu, a, I), images[a][b] * minors[I][J]);
                    }
                }
    return out;
}

Matrix<Rational> restriction_matrix(const Matrix<Rational>& w_basis, const GradedSlot& s) {
    return restriction_map(w_basis, s).to_dense();
}

Subspace<Rational> subspace_product(const Subspace<Rational>& vstar, const Subspace<Rational>& g, int n, int nu,
                                    int k) {
    GradedSlot lower{n, nu, k - 1, 0};
    Matrix<Rational> rows(0, slot_dim({n, nu, k, 0}));
    if (static_cast<int>(vstar.ambient_dim()) != n) throw std::invalid_argument("subspace_product: V* must live in T*");
    if (g.ambient_dim() != slot_dim(lower)) throw std::invalid_argument("subspace_product: g has the wrong slot");
    for (std::size_t v = 0; v < vstar.dim(); ++v) {
        auto mult = multiply_by_covector(vstar.basis().row(v), lower);
        for (std::size_t p = 0; p < g.dim(); ++p) rows.append_row(mult.apply(g.basis().row(p)));
    }
    return Subspace<Rational>::span(rows);
}

Subspace<Rational> symmetric_power_tensor(const Subspace<Rational>& vstar, int nu, int k) {
    const int n = static_cast<int>(vstar.ambient_dim());
    auto acc = Subspace<Rational>::full(static_cast<std::size_t>(nu));  // S^0 V* ⊗ N = N
    for (int d = 1; d <= k; ++d) acc = subspace_product(vstar, acc, n, nu, d);
    return acc;
}

}  // namespace spencer
