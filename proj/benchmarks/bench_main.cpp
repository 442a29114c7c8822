#include "qfm/classifiers.hpp"
#include "qfm/kernels.hpp"
#include "qfm/pqc.hpp"
#include "qfm/training.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace qfm;

namespace {

std::vector<double> uniform(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& e : v) {
        e = u(rng);
    }
    return v;
}

RowMatrix samples(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    RowMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = g(rng);
    }
    return m;
}

void BM_Embed(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const CircuitSpec spec{static_cast<int>(state.range(0)), 6, 16};
    const auto p = uniform(param_count(spec), rng);
    const auto x = uniform(16, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(embed(spec, p, x));
    }
}
BENCHMARK(BM_Embed)->DenseRange(1, 7);

void BM_BatchGradient(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const int n = static_cast<int>(state.range(0));
    const CircuitSpec spec{n, 6, 16};
    const auto p = uniform(param_count(spec), rng);
    const LinearHead head{uniform(static_cast<std::size_t>(n), rng), 0.0};
    const RowMatrix x = samples(64, 16, rng);
    std::vector<int> y(64);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = i % 2 == 0 ? 1 : -1;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(gradient(spec, p, head, x, y));
    }
}
BENCHMARK(BM_BatchGradient)->Arg(2)->Arg(4)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_FidelityGram(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const CircuitSpec spec{4, 6, 16};
    const auto p = uniform(param_count(spec), rng);
    const RowMatrix x = samples(static_cast<int>(state.range(0)), 16, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fidelity_gram(spec, p, x));
    }
}
BENCHMARK(BM_FidelityGram)->Arg(100)->Arg(280)->Unit(benchmark::kMillisecond);

void BM_SvmFit(benchmark::State& state) {
    std::mt19937_64 rng(4);
    const RowMatrix x = samples(static_cast<int>(state.range(0)), 16, rng);
    std::vector<int> y;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        y.push_back(x(i, 0) * x(i, 1) >= 0.0 ? 1 : -1);
    }
    const auto gram = rbf_gram(x, x, gamma_scale(x)).values;
    for (auto _ : state) {
        benchmark::DoNotOptimize(svm_fit(gram, y));
    }
}
BENCHMARK(BM_SvmFit)->Arg(280)->Arg(2800)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
