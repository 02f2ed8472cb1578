#include <benchmark/benchmark.h>

#include "iav/wire_codec.hpp"

namespace {

using namespace iav;

CpmMessage busy_cpm(std::size_t objects) {
  CpmMessage m;
  m.header.station_id = 2;
  m.current_position = {12.0, 10.0};
  for (std::size_t i = 0; i < objects; ++i)
    m.perceived_objects.push_back({ObjectClassCode::Object, 1.0 + 0.01 * static_cast<double>(i), 0.0, 10.0});
  return m;
}

void BM_EncodeCam(benchmark::State& state) {
  CamMessage m;
  m.header.station_id = 7;
  m.current_position = {12.5, -3.25};
  for (auto _ : state) benchmark::DoNotOptimize(encode(m));
}
BENCHMARK(BM_EncodeCam);

void BM_DecodeCam(benchmark::State& state) {
  CamMessage m;
  m.header.station_id = 7;
  const Bytes b = encode(m);
  for (auto _ : state) benchmark::DoNotOptimize(decode(b));
}
BENCHMARK(BM_DecodeCam);

void BM_RoundTripCpm(benchmark::State& state) {
  const CpmMessage m = busy_cpm(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decode(encode(m)));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * encode(m).size()));
}
BENCHMARK(BM_RoundTripCpm)->Arg(0)->Arg(8)->Arg(255);

}  // namespace
