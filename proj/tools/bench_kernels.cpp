// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "gl2reps/charfun.hpp"
#include "gl2reps/oracle.hpp"

using namespace gl2reps;

namespace {

RingSpec spec_of(const benchmark::State& state) {
  return RingSpec{Flavor::padic, static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
}

void BM_Enumerate(benchmark::State& state) {
  const RingSpec spec = spec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(MatrixGroup::enumerate(spec));
}

void BM_EnumerateSerial(benchmark::State& state) {
  const RingSpec spec = spec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(MatrixGroup::enumerate_serial(spec));
}

struct InduceFixture {
  ClassesPtr classes;
  LinearChar chi;

  explicit InduceFixture(const RingSpec& spec) {
    const auto G = MatrixGroup::enumerate(spec);
    classes = conjugacy_classes(Subgroup::whole(G));
    chi = linear_characters(borel_subgroup(G)).back();
  }
};

void BM_Induce(benchmark::State& state) {
  const InduceFixture f(spec_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(induce(f.chi, f.classes));
}

void BM_InduceSerial(benchmark::State& state) {
  const InduceFixture f(spec_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(induce_serial(f.chi, f.classes));
}

void BM_ClassAlgebra(benchmark::State& state) {
  const auto cc = conjugacy_classes(Subgroup::whole(MatrixGroup::enumerate(spec_of(state))));
  for (auto _ : state) benchmark::DoNotOptimize(class_algebra(*cc));
}

void BM_ClassAlgebraSerial(benchmark::State& state) {
  const auto cc = conjugacy_classes(Subgroup::whole(MatrixGroup::enumerate(spec_of(state))));
  for (auto _ : state) benchmark::DoNotOptimize(class_algebra_serial(*cc));
}

}  // namespace

BENCHMARK(BM_Enumerate)->Args({2, 3})->Args({3, 2})->Args({2, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateSerial)->Args({2, 3})->Args({3, 2})->Args({2, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Induce)->Args({2, 3})->Args({3, 2})->Args({2, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InduceSerial)->Args({2, 3})->Args({3, 2})->Args({2, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassAlgebra)->Args({2, 2})->Args({3, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassAlgebraSerial)->Args({2, 2})->Args({3, 2})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
