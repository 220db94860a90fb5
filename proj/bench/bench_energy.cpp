// Serial reference kernel against the OpenMP kernel on the n = 1 problem.

#include "cmclab/energy_kernels.hpp"
#include "cmclab/graph_surface.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

using namespace cmclab;

namespace {

struct Fixture {
    SlabChart chart;
    StripField field;
    SpiralProfile spiral;
    std::map<int, std::shared_ptr<const GraphProblem>> problems;

    Fixture()
        : chart(make_spec()), field(chart, -0.05), spiral{chart.spec().lambda1, chart.spec().lambda2}
    {
    }

    static SlabSpec make_spec()
    {
        const double H = 0.3;
        const double c = find_cH(H).c_H;
        return {H, c + 0.05, c + 0.08};
    }

    const GraphProblem& problem(int n_lambda)
    {
        auto& p = problems[n_lambda];
        if (!p) {
            const Omega omega(field, 1, default_radius(1));
            const BoundaryCurve gamma = build_gamma(omega, spiral, n_lambda, 2 * n_lambda);
            p = std::make_shared<const GraphProblem>(GraphProblem::theta_graph(omega, gamma));
        }
        return *p;
    }
};

Fixture& fixture()
{
    static Fixture f;
    return f;
}

void run(benchmark::State& state, Kernel kernel)
{
    const GraphProblem& p = fixture().problem(static_cast<int>(state.range(0)));
    const Eigen::VectorXd u = p.initial();
    Eigen::VectorXd gI, gV;
    for (auto _ : state) {
        const Energy e = evaluate_energy(p, u, &gI, &gV, kernel);
        benchmark::DoNotOptimize(e.I);
        benchmark::DoNotOptimize(gI.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.triangles().size()));
}

void BM_EnergySerial(benchmark::State& state) { run(state, Kernel::serial); }
void BM_EnergyOpenMP(benchmark::State& state) { run(state, Kernel::openmp); }

} // namespace

BENCHMARK(BM_EnergySerial)->Arg(48)->Arg(96)->Arg(192)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EnergyOpenMP)->Arg(48)->Arg(96)->Arg(192)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
