#include "spencer/cohomology.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace spencer {

RMatrix level_tensor_forms(const RSubspace& level, int n, int nu, int i, int j, VarMask forms) {
    return tensor_with_forms(level.basis(), n, nu, i, j, [forms](VarMask m) { return (m & ~forms) == 0; });
}

std::size_t delta_rank(const RSubspace& level, int n, int nu, int i, int j, VarMask forms, VarMask derivs) {
    if (i < 1 || j < 0 || j >= n || level.dim() == 0) return 0;
    auto rows = level_tensor_forms(level, n, nu, i, j, forms);
    if (rows.rows() == 0) return 0;
    return image_rank(delta_map({n, nu, i, j}, derivs), rows);
}

std::size_t CohomologyTable::dim(int i, int j) const {
    if (i < 0 || i > i_max || j < 0 || j > n) return 0;
    return dims[static_cast<std::size_t>(i) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(j)];
}

std::vector<CohomologyCell> CohomologyTable::nonzero() const {
    std::vector<CohomologyCell> out;
    for (int i = 0; i <= i_max; ++i)
        for (int j = 0; j <= n; ++j)
            if (dim(i, j)) out.push_back({i, j, dim(i, j)});
    return out;
}

namespace {

SymbolicSystem reach(const SymbolicSystem& g, int level) {
    if (level <= g.cap()) return g;
    return g.with_cap(level);
}

std::size_t masked_dim(const SymbolicSystem& g, int i, int j, VarMask mask) {
    const int nf = std::popcount(mask);
    if (i < 0 || j < 0 || j > nf) return 0;
    const int n = g.n(), nu = g.nu();
    std::size_t cochains = g.dim(i) * binomial(nf, j);
    std::size_t out = delta_rank(g.level(i), n, nu, i, j, mask, mask);
    std::size_t in = j >= 1 ? delta_rank(g.level(i + 1), n, nu, i + 1, j - 1, mask, mask) : 0;
    return cochains - out - in;
}

CohomologyTable build_table(const SymbolicSystem& g0, int i_max, VarMask mask, std::string source) {
    const int nf = std::popcount(mask);
    const SymbolicSystem g = reach(g0, i_max + 1);
    const int n = g.n(), nu = g.nu();
    // ranks[i][j] = rank δ on g_i ⊗ Λ^j, for 0 ≤ i ≤ i_max + 1
    const int rows = i_max + 2;
    std::vector<std::size_t> ranks(static_cast<std::size_t>(rows) * static_cast<std::size_t>(nf + 1), 0);
    std::vector<std::pair<int, int>> tasks;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j <= nf; ++j)
            if (i <= i_max || j < nf) tasks.emplace_back(i, j);
    const auto count = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        auto [i, j] = tasks[static_cast<std::size_t>(t)];
        ranks[static_cast<std::size_t>(i) * static_cast<std::size_t>(nf + 1) + static_cast<std::size_t>(j)] =
            delta_rank(g.level(i), n, nu, i, j, mask, mask);
    }
    CohomologyTable t;
    t.n = nf;
    t.i_max = i_max;
    t.source = std::move(source);
    auto rk = [&](int i, int j) {
        if (i < 0 || j < 0 || j > nf) return std::size_t{0};
        return ranks[static_cast<std::size_t>(i) * static_cast<std::size_t>(nf + 1) + static_cast<std::size_t>(j)];
    };
    for (int i = 0; i <= i_max; ++i)
        for (int j = 0; j <= nf; ++j) t.dims.push_back(g.dim(i) * binomial(nf, j) - rk(i, j) - rk(i + 1, j - 1));
    return t;
}

}  // namespace

std::size_t cohomology_dim(const SymbolicSystem& g, int i, int j) {
    return masked_cohomology_dim(g, i, j, all_vars(g.n()));
}

std::size_t masked_cohomology_dim(const SymbolicSystem& g, int i, int j, VarMask mask) {
    if (i < 0 || j < 0 || j > std::popcount(mask)) return 0;
    return masked_dim(reach(g, j >= 1 ? i + 1 : i), i, j, mask);
}

CohomologyTable cohomology_table(const SymbolicSystem& g, int i_max) {
    return build_table(g, i_max, all_vars(g.n()), "delta");
}

CohomologyTable masked_cohomology_table(const SymbolicSystem& g, int i_max, VarMask mask, std::string source) {
    return build_table(g, i_max, mask, std::move(source));
}

RMatrix random_basis(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(-10, 10);
    while (true) {
        RMatrix b(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) b(r, c) = d(rng);
        if (rank(b) == static_cast<std::size_t>(n)) return b;
    }
}

bool SurjectivityChain::all() const {
    return std::all_of(surjective.begin(), surjective.end(), [](bool b) { return b; });
}

SurjectivityChain surjectivity_chain(const RSubspace& source, const RSubspace& target, int n, int nu, int k,
                                     const RMatrix& basis) {
    SurjectivityChain c;
    RSubspace src = source, tgt = target;
    for (int i = 0; i < n; ++i) {
        auto v = basis.row(static_cast<std::size_t>(i));
        auto ds = directional_derivative(v, {n, nu, k, 0});
        auto img = image(ds, src);
        c.source_dims.push_back(src.dim());
        c.target_dims.push_back(tgt.dim());
        c.image_dims.push_back(img.dim());
        c.surjective.push_back(img.dim() == tgt.dim() && tgt.contains(img));
        if (i + 1 < n) {
            src = kernel_on(ds, src);
            tgt = kernel_on(directional_derivative(v, {n, nu, k - 1, 0}), tgt);
        }
    }
    return c;
}

std::string to_string(CartanVerdict v) {
    switch (v) {
        case CartanVerdict::Involutive: return "involutive-at-k";
        case CartanVerdict::NotInvolutive: return "not-involutive-at-k";
        case CartanVerdict::BasisDegenerate: return "basis-degenerate";
    }
    return "?";
}

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Nonzero H^{i,j}(g^{|k⟩}) for k ≤ i ≤ window, j ≥ 1.
bool derived_cohomology_vanishes(const SymbolicSystem& g, int k, int window) {
    auto d = derived_system(g, k).with_cap(window + 1);
    auto t = cohomology_table(d, window);
    for (const auto& c : t.nonzero())
        if (c.i >= k && c.j >= 1) return false;
    return true;
}

int cohomology_window(const SymbolicSystem& g, int k) { return std::max(g.cap() - 1, k + g.n()); }

}  // namespace

CartanResult cartan_test(const SymbolicSystem& g, int k, std::uint64_t seed, int retries) {
    CartanResult res;
    res.k = k;
    res.seed = seed;
    const int n = g.n(), nu = g.nu();
    const RSubspace& gk = g.level(k);
    RSubspace up = prolong(gk, n, nu, k);
    std::mt19937_64 rng(mix(seed, static_cast<std::uint64_t>(k)));
    for (int a = 1; a <= retries; ++a) {
        res.attempts = a;
        res.basis = random_basis(n, rng);
        res.chain = surjectivity_chain(up, gk, n, nu, k + 1, res.basis);
        if (res.chain.all()) {
            res.verdict = CartanVerdict::Involutive;
            return res;
        }
    }
    res.verdict = derived_cohomology_vanishes(g, k, cohomology_window(g, k)) ? CartanVerdict::BasisDegenerate
                                                                            : CartanVerdict::NotInvolutive;
    return res;
}

InvolutivityResult is_involutive(const SymbolicSystem& g, std::uint64_t seed) {
    InvolutivityResult r;
    auto prof = order_profile(g);
    r.certified = prof.certified;
    r.involutive = true;
    for (int k : prof.orders) {
        OrderCheck oc;
        oc.k = k;
        oc.cartan = cartan_test(g, k, seed);
        oc.window = cohomology_window(g, k);
        oc.cohomology_vanishes = derived_cohomology_vanishes(g, k, oc.window);
        if (oc.cartan.verdict != CartanVerdict::Involutive) r.involutive = false;
        if (oc.cartan.verdict == CartanVerdict::BasisDegenerate) r.decided = false;
        r.per_order.push_back(std::move(oc));
    }
    return r;
}

bool property_I1(const CohomologyTable& t) {
    for (int i = 0; i <= t.i_max; ++i) {
        if (t.dim(i, 1) != 0) continue;
        for (int j = 2; j <= t.n; ++j)
            if (t.dim(i, j) != 0) return false;
    }
    return true;
}

PropertyI2Result property_I2(const SymbolicSystem& g, std::uint64_t seed, int retries) {
    PropertyI2Result r;
    auto prof = order_profile(g);
    for (int k = 1; k <= g.cap(); ++k) {
        if (prof.contains(k)) continue;
        std::mt19937_64 rng(mix(seed, 1000 + static_cast<std::uint64_t>(k)));
        bool ok = false;
        for (int a = 0; a < retries && !ok; ++a)
            ok = surjectivity_chain(g.level(k), g.level(k - 1), g.n(), g.nu(), k, random_basis(g.n(), rng)).all();
        if (!ok) {
            r.holds = false;
            r.failing_levels.push_back(k);
        }
    }
    return r;
}

bool check_I3(const SymbolicSystem& g, const Splitting& s) {
    auto prof = order_profile(g);
    for (int k = 1; k <= g.cap(); ++k) {
        auto chain = surjectivity_chain(g.level(k), g.level(k - 1), g.n(), g.nu(), k, s.basis);
        auto pos = std::find(prof.orders.begin(), prof.orders.end(), k);
        int m = pos == prof.orders.end() ? -1 : static_cast<int>(pos - prof.orders.begin());
        for (int i = 0; i < g.n(); ++i) {
            if (chain.surjective[static_cast<std::size_t>(i)]) continue;
            if (m < 0 || s.summand[static_cast<std::size_t>(i)] != m) return false;
        }
    }
    return true;
}

std::string to_string(SearchOutcome o) {
    return o == SearchOutcome::Found ? "found" : "not-found-within-budget";
}

PropertyI3Result property_I3(const SymbolicSystem& g, std::uint64_t seed, int random_budget) {
    PropertyI3Result r;
    const int n = g.n();
    auto prof = order_profile(g);
    const int s = std::max<int>(1, static_cast<int>(prof.orders.size()));
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t assignments = 1;
    for (int i = 0; i < n; ++i) assignments *= static_cast<std::size_t>(s);
    do {
        for (std::size_t code = 0; code < assignments; ++code) {
            Splitting sp{RMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n)), {}};
            std::vector<int> axis_summand(static_cast<std::size_t>(n));
            std::size_t c = code;
            for (int a = 0; a < n; ++a) {
                axis_summand[static_cast<std::size_t>(a)] = static_cast<int>(c % static_cast<std::size_t>(s));
                c /= static_cast<std::size_t>(s);
            }
            for (int i = 0; i < n; ++i) {
                sp.basis(static_cast<std::size_t>(i), static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])) = 1;
                sp.summand.push_back(axis_summand[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
            }
            ++r.coordinate_splittings_tried;
            if (check_I3(g, sp)) {
                r.outcome = SearchOutcome::Found;
                r.witness = std::move(sp);
                return r;
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::mt19937_64 rng(mix(seed, 0xA11CE));
    std::uniform_int_distribution<int> pick(0, s - 1);
    for (int b = 0; b < random_budget; ++b) {
        Splitting sp{random_basis(n, rng), {}};
        for (int i = 0; i < n; ++i) sp.summand.push_back(pick(rng));
        ++r.random_splittings_tried;
        if (check_I3(g, sp)) {
            r.outcome = SearchOutcome::Found;
            r.witness = std::move(sp);
            return r;
        }
    }
    return r;
}

AcyclicityResult acyclicity(const CohomologyTable& t, const OrderProfile& ord, int m, bool co) {
    AcyclicityResult r;
    for (int i = 0; i <= t.i_max; ++i)
        for (int j = 0; j <= t.n; ++j) {
            bool in_range;
            if (co)
                in_range = i >= ord.r_min() && j >= t.n - m;
            else
                in_range = j <= m && !(i == 0 && j == 0) && !ord.contains(i + 1);
            if (in_range && t.dim(i, j) != 0) r.violations.push_back({i, j, t.dim(i, j)});
        }
    r.holds = r.violations.empty();
    return r;
}

}  // namespace spencer
