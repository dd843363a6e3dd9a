// Microbenchmarks for the solver hot paths: the modified Bessel
// evaluation, the weighted hp assembly in the extended variable, the
// diagonalized Dirichlet-to-Neumann apply, and one step of each time
// integrator.
//
// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include <Eigen/Dense>

#include "fracwave/dtn_operator.hpp"
#include "fracwave/extended_mesh.hpp"
#include "fracwave/fractional.hpp"
#include "fracwave/omega_fem.hpp"
#include "fracwave/special_functions.hpp"
#include "fracwave/time_stepping.hpp"

namespace {

struct SolverSetup {
  std::unique_ptr<fracwave::OmegaMesh> mesh;
  fracwave::OmegaMatrices mats;
  std::unique_ptr<fracwave::DtnOperator> op;
  Eigen::VectorXd u;

  SolverSetup(fracwave::Domain domain, int n, double s) {
    mesh = std::make_unique<fracwave::OmegaMesh>(domain, n);
    mats = fracwave::assemble_omega(*mesh);
    const fracwave::FractionalOrder frac = fracwave::make_fractional_order(s);
    const fracwave::GeometricMesh ymesh =
        fracwave::build_geometric_mesh(3.0, 9, 0.5);
    const fracwave::DegreeVector degrees =
        fracwave::build_degree_vector(9, 1.0);
    const fracwave::HpSpaceY hp =
        fracwave::assemble_weighted_matrices(ymesh, degrees, frac.alpha);
    op = std::make_unique<fracwave::DtnOperator>(hp, mats, frac);
    std::mt19937_64 rng(20260214);
    std::normal_distribution<double> dist;
    u.resize(mesh->num_interior());
    for (int i = 0; i < u.size(); ++i) u[i] = dist(rng);
  }
};

void BM_BesselK(benchmark::State& state) {
  const double nu = 0.75;
  double z = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fracwave::bessel_k(nu, z));
    z = z < 40.0 ? z * 1.07 : 0.05;
  }
}
BENCHMARK(BM_BesselK);

void BM_AssembleWeightedY(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const fracwave::GeometricMesh mesh =
      fracwave::build_geometric_mesh(3.0, M, 0.5);
  const fracwave::DegreeVector degrees =
      fracwave::build_degree_vector(M, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fracwave::assemble_weighted_matrices(mesh, degrees, -0.5));
  }
}
BENCHMARK(BM_AssembleWeightedY)->Arg(6)->Arg(9)->Arg(12);

void BM_DtnApply1d(benchmark::State& state) {
  SolverSetup setup(fracwave::Domain::interval,
                    static_cast<int>(state.range(0)), 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(setup.op->apply(setup.u));
  }
}
BENCHMARK(BM_DtnApply1d)->Arg(64)->Arg(256)->Arg(1024);

void BM_DtnApply2d(benchmark::State& state) {
  SolverSetup setup(fracwave::Domain::square,
                    static_cast<int>(state.range(0)), 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(setup.op->apply(setup.u));
  }
}
BENCHMARK(BM_DtnApply2d)->Arg(16)->Arg(32);

void BM_LeapfrogStep(benchmark::State& state) {
  SolverSetup setup(fracwave::Domain::interval,
                    static_cast<int>(state.range(0)), 0.5);
  const fracwave::TimeGrid grid = fracwave::make_time_grid(1.0, 1 << 20);
  fracwave::LeapfrogStepper stepper(*setup.op, grid);
  fracwave::WaveState ws;
  ws.u_prev = setup.u;
  ws.u_curr = setup.u;
  ws.step = 1;
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(setup.u.size());
  for (auto _ : state) {
    stepper.step(ws, f, grid);
  }
}
BENCHMARK(BM_LeapfrogStep)->Arg(64)->Arg(256);

void BM_TrapezoidalStep(benchmark::State& state) {
  SolverSetup setup(fracwave::Domain::interval,
                    static_cast<int>(state.range(0)), 0.5);
  const fracwave::TimeGrid grid = fracwave::make_time_grid(1.0, 1 << 20);
  fracwave::TrapezoidalStepper stepper(*setup.op, grid);
  fracwave::WaveState ws;
  ws.u_prev = setup.u;
  ws.u_curr = setup.u;
  ws.step = 1;
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(setup.u.size());
  for (auto _ : state) {
    stepper.step(ws, f, grid);
  }
}
BENCHMARK(BM_TrapezoidalStep)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
