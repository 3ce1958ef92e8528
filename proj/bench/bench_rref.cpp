// Serial vs OpenMP Gauss-Jordan on sparse integer matrices and on δ matrices.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <random>

#include <omp.h>

#include "spencer/matrix.hpp"
#include "spencer/tensor_basis.hpp"

using namespace spencer;

namespace {

Matrix<Rational> random_matrix(std::size_t rows, std::size_t cols, double density, std::mt19937_64& rng) {
    Matrix<Rational> m(rows, cols);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> v(-9, 9);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (u(rng) < density) m(r, c) = v(rng);
    return m;
}

template <class Fn>
double millis(Fn&& fn, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void run(const char* label, const Matrix<Rational>& m, int reps) {
    Rref<Rational> a, b;
    double ts = millis([&] { a = rref_serial(m); }, reps);
    double tp = millis([&] { b = rref_parallel(m); }, reps);
    bool same = a.rank == b.rank && a.basis == b.basis && a.pivots == b.pivots;
    std::printf("%-28s %5zux%-5zu rank %5zu  serial %9.2f ms  parallel %9.2f ms  speedup %5.2f  %s\n", label, m.rows(),
                m.cols(), a.rank, ts, tp, ts / tp, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rref benchmark"};
    int size = 160;
    int reps = 3;
    double density = 0.15;
    std::uint64_t seed = 0;
    app.add_option("--size", size, "rows and columns of the random matrices");
    app.add_option("--reps", reps, "repetitions per timing");
    app.add_option("--density", density, "fraction of nonzero entries");
    app.add_option("--seed", seed, "RNG seed");
    CLI11_PARSE(app, argc, argv);

    std::printf("threads: %d\n", omp_get_max_threads());
    std::mt19937_64 rng(seed);
    const auto n = static_cast<std::size_t>(size);
    run("random square", random_matrix(n, n, density, rng), reps);
    run("random wide", random_matrix(n / 2, 2 * n, density, rng), reps);
    for (int k : {6, 8}) {
        GradedSlot s{3, 2, k, 1};
        char label[64];
        std::snprintf(label, sizeof label, "delta n=3 nu=2 k=%d j=1", k);
        run(label, delta_matrix(s), reps);
    }
    return 0;
}
