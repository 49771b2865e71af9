// Serial reference kernels against the OpenMP ones.
// Arguments: problem size, then the worker count (0 for the serial reference).
#include <map>

#include <benchmark/benchmark.h>

#include "gfrob/parallel.hpp"
#include "gfrob/reference.hpp"
#include "gfrob/train.hpp"

using namespace gfrob;

namespace {

const Task& task_of_size(std::size_t count) {
    static std::map<std::size_t, Task> cache;
    auto it = cache.find(count);
    if (it == cache.end())
        it = cache.emplace(count, generate_task({TaskKind::least_squares, 64, 16, count, 100.0, 0.1, 1})).first;
    return it->second;
}

SamplingLaw<double> law_of_size(std::size_t n) {
    RealMatrix g = RealMatrix::identity(n);
    for (std::size_t i = 0; i + 1 < n; ++i) g(i, i + 1) = g(i + 1, i) = 0.3;
    return {LawKind::gaussian, make_space(g), 1};
}

void BM_evaluate(benchmark::State& state) {
    const auto& t = task_of_size(static_cast<std::size_t>(state.range(0)));
    const int threads = static_cast<int>(state.range(1));
    parallel::set_thread_count(threads);
    for (auto _ : state) {
        auto g = threads == 0 ? reference::evaluate(t.truth, t.loss, t.data) : evaluate(t.truth, t.loss, t.data);
        benchmark::DoNotOptimize(g.risk);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_input_moments(benchmark::State& state) {
    const auto& t = task_of_size(static_cast<std::size_t>(state.range(0)));
    const int threads = static_cast<int>(state.range(1));
    parallel::set_thread_count(threads);
    for (auto _ : state) {
        auto m = threads == 0 ? reference::input_moments(t.data) : input_moments(t.data);
        benchmark::DoNotOptimize(m.covariance.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_metric_trace(benchmark::State& state) {
    const auto law = law_of_size(32);
    const SesquilinearForm<double> form(law.space, RealMatrix::identity(32));
    const auto count = static_cast<std::size_t>(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    parallel::set_thread_count(threads);
    for (auto _ : state) {
        auto r = threads == 0 ? reference::estimate_metric_trace(form, law, count)
                              : estimate_metric_trace(form, law, count);
        benchmark::DoNotOptimize(r.estimate);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_frob_inner(benchmark::State& state) {
    const auto law = law_of_size(32);
    RealMatrix s(16, 32);
    for (std::size_t k = 0; k < s.size(); ++k) s.data()[k] = static_cast<double>(k % 7) - 3.0;
    const MetrizedMap<double> map(law.space, InnerProductSpace<double>::standard(16), s);
    const auto count = static_cast<std::size_t>(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    parallel::set_thread_count(threads);
    for (auto _ : state) {
        auto r = threads == 0 ? reference::estimate_frob_inner(map, map, law, count)
                              : estimate_frob_inner(map, map, law, count);
        benchmark::DoNotOptimize(r.estimate);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b, std::int64_t n) {
    b->ArgNames({"N", "threads"});
    for (std::int64_t threads : {0, 1, 2, 4, 8}) b->Args({n, threads});
    b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_evaluate)->Apply([](auto* b) { sizes(b, 100000); });
BENCHMARK(BM_input_moments)->Apply([](auto* b) { sizes(b, 100000); });
BENCHMARK(BM_metric_trace)->Apply([](auto* b) { sizes(b, 100000); });
BENCHMARK(BM_frob_inner)->Apply([](auto* b) { sizes(b, 100000); });

BENCHMARK_MAIN();
