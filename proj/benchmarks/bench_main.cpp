#include <benchmark/benchmark.h>

#include "amc/channel.hpp"
#include "amc/classifier.hpp"
#include "amc/features.hpp"
#include "amc/log.hpp"
#include "amc/rng.hpp"
#include "amc/waveform.hpp"

namespace {

void BM_SynthesizeSc(benchmark::State& state) {
  amc::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(amc::synthesize({amc::Family::SC, amc::Order::QAM16}, 50e6, 1e-3, rng));
}
BENCHMARK(BM_SynthesizeSc)->Unit(benchmark::kMillisecond);

void BM_SynthesizeOfdm(benchmark::State& state) {
  amc::Rng rng(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(amc::synthesize({amc::Family::OFDM, amc::Order::QAM64}, 50e6, 1e-3, rng));
}
BENCHMARK(BM_SynthesizeOfdm)->Unit(benchmark::kMillisecond);

void BM_Channel(benchmark::State& state) {
  amc::Rng rng(3);
  const auto seg = amc::synthesize({amc::Family::SC, amc::Order::QPSK}, 50e6, 1e-3, rng);
  amc::ChannelConfig cfg;
  cfg.snr_db = 10.0;
  cfg.tx_profile = cfg.rx_profile = state.range(0) ? amc::HardwareProfile::sdr() : amc::HardwareProfile::lab();
  for (auto _ : state) benchmark::DoNotOptimize(amc::apply_channel(seg, std::nullopt, cfg, rng));
}
BENCHMARK(BM_Channel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Featurize(benchmark::State& state) {
  amc::Rng rng(4);
  amc::ChannelConfig cfg;
  cfg.snr_db = 10.0;
  const auto seg = amc::apply_channel(amc::synthesize({amc::Family::SC, amc::Order::QAM16}, 50e6, 1e-3, rng),
                                      std::nullopt, cfg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(amc::featurize(seg));
}
BENCHMARK(BM_Featurize)->Unit(benchmark::kMillisecond);

void BM_TrainMulticlass(benchmark::State& state) {
  const auto n = state.range(0);
  amc::Rng rng(5);
  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(amc::kNumFeatures));
  std::vector<amc::ClassLabel> y;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(i) % amc::kNumClasses;
    for (Eigen::Index d = 0; d < X.cols(); ++d) X(i, d) = (static_cast<std::size_t>(d) == c ? 3.0 : 0.0) + rng.normal();
    y.push_back(amc::kAllClasses[c]);
  }
  for (auto _ : state) benchmark::DoNotOptimize(amc::train_multiclass(X, y));
}
BENCHMARK(BM_TrainMulticlass)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
int main(int argc, char** argv) {
  amc::log::set_quiet(true);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
