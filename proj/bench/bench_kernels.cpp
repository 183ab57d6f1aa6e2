// Serial vs OpenMP timings of the two data-parallel kernels.
//   bench_kernels [rows] [replications]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "cwm/evaluation.hpp"
#include "cwm/kernels.hpp"
#include "cwm/scenarios.hpp"

using namespace cwm;

template <class F>
double seconds(F&& f, int repeat) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < repeat; ++r) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / repeat;
}

int main(int argc, char** argv) {
  const int rows = argc > 1 ? std::atoi(argv[1]) : 200000;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 200;
  std::printf("workers: %d\n", kernels::worker_count());

  MixtureSpec spec = *builtin_scenario("paper-mar").spec;
  spec.n = rows;
  Rng rng(1);
  const GeneratedData gen = gen_mixture_dataset(spec, rng);
  Matrix W(rows, 3);
  W.leftCols(2) = gen.data.X;
  W.col(2) = gen.data.y;

  std::vector<kernels::WeightedGaussian> terms;
  for (int g = 0; g < 10; ++g) {
    const auto& c = spec.covariances[static_cast<std::size_t>(g % 2)];
    terms.push_back({std::log(0.1), spec.means[static_cast<std::size_t>(g % 2)] + Vector::Constant(3, 0.1 * g),
                     CholFactor::of(c)});
  }
  Matrix a;
  Matrix b;
  const double ts = seconds([&] { kernels::component_log_weights_serial(W, terms, a); }, 5);
  const double tp = seconds([&] { kernels::component_log_weights_parallel(W, terms, b); }, 5);
  std::printf("component_log_weights  n=%d G=10  serial %.4fs  parallel %.4fs  speedup %.2f  identical %s\n", rows,
              ts, tp, ts / tp, a == b ? "yes" : "no");

  const UnivariateGmm truth = response_marginal(MixtureWeights{spec.weights}, spec.components());
  const GmmFitConfig fit;
  std::vector<double> ks;
  std::vector<double> kp;
  const double rs = seconds([&] { ks = kernels::kl_replications_serial(truth, 1000, reps, fit, Rng(7)); }, 1);
  const double rp = seconds([&] { kp = kernels::kl_replications_parallel(truth, 1000, reps, fit, Rng(7)); }, 1);
  std::printf("kl_replications        N=%d n=1000  serial %.4fs  parallel %.4fs  speedup %.2f  identical %s\n", reps,
              rs, rp, rs / rp, ks == kp ? "yes" : "no");
  return 0;
}
