#include <benchmark/benchmark.h>

#include <cmath>

#include "aww/asymptotics.hpp"
#include "aww/hilbert.hpp"
#include "aww/reduced.hpp"

using namespace aww;

namespace {

struct Fixture {
    BathSpec bath = BathSpec::reference();
    AtomPath atom = reference_atom();
    EigenFrame frame = EigenFrame::track(atom, TimeGrid{0.0, 1.0, 2000});
    CVector z0 = CVector::Unit(2, 0);
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

}  // namespace

static void BM_HalfLineFinite(benchmark::State& state) {
    const BathSpec bath = BathSpec::reference();
    const double horizon = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(half_line_transform(bath, 1.3, horizon));
}
BENCHMARK(BM_HalfLineFinite)->Arg(1)->Arg(10)->Arg(100);

static void BM_HalfLineInfinite(benchmark::State& state) {
    const BathSpec bath = BathSpec::reference();
    for (auto _ : state) benchmark::DoNotOptimize(half_line_transform(bath, 1.3, BathSpec::kInfinity));
}
BENCHMARK(BM_HalfLineInfinite);

static void BM_DiscretizeBath(benchmark::State& state) {
    const BathSpec bath = BathSpec::reference();
    const double eps = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(discretize_bath(bath, eps).size());
}
BENCHMARK(BM_DiscretizeBath)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_PropagateExact(benchmark::State& state) {
    const Fixture& f = fixture();
    const double eps = 1.0 / static_cast<double>(state.range(0));
    const ModeGrid grid = discretize_bath(f.bath, eps);
    for (auto _ : state) {
        const Trajectory tr = propagate_exact(f.atom, f.frame, grid, f.z0, eps, std::sqrt(eps), 1.0);
        benchmark::DoNotOptimize(tr.z.back());
    }
    state.counters["modes"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_PropagateExact)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_Volterra(benchmark::State& state) {
    const Fixture& f = fixture();
    const double eps = 1.0 / static_cast<double>(state.range(0));
    VolterraOptions opts;
    opts.mode = state.range(1) == 0 ? MemoryMode::frozen : MemoryMode::full;
    for (auto _ : state) {
        const Trajectory tr = volterra_solve(f.atom, f.frame, f.bath, eps, std::sqrt(eps), f.z0, 1.0, opts);
        benchmark::DoNotOptimize(tr.z.back());
    }
}
BENCHMARK(BM_Volterra)->Args({10, 0})->Args({20, 0})->Args({10, 1})->Args({20, 1})->Unit(benchmark::kMillisecond);

static void BM_LeadingOrderTables(benchmark::State& state) {
    const Fixture& f = fixture();
    for (auto _ : state) {
        const LeadingOrder lo(f.atom, f.frame, f.bath);
        benchmark::DoNotOptimize(lo.int_beta(0, 1.0));
    }
}
BENCHMARK(BM_LeadingOrderTables)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
