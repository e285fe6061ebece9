#include <benchmark/benchmark.h>

#include "mapl/constraints.hpp"
#include "mapl/kernels.hpp"
#include "mapl/lexicon.hpp"
#include "mapl/synthesis.hpp"

namespace {

void BM_LossRmBt(benchmark::State& state) {
    double r = 0.25;
    for (auto _ : state) {
        auto out = mapl::loss_rm_bt(r, -r);
        benchmark::DoNotOptimize(out.value);
        r = -r;
    }
}
BENCHMARK(BM_LossRmBt);

void BM_LossRmInter(benchmark::State& state) {
    const mapl::RewardQuad up{1.2, -0.3, 0.4, 0.1};
    const mapl::RewardQuad down{0.2, -0.1, 0.9, -0.4};
    for (auto _ : state) {
        auto out = mapl::loss_rm_inter(up, down);
        benchmark::DoNotOptimize(out.value);
    }
}
BENCHMARK(BM_LossRmInter);

void BM_InterProbBothRoutes(benchmark::State& state) {
    const mapl::RewardQuad q{3.5, -2.0, 1.0, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(mapl::inter_prob(q));
    }
}
BENCHMARK(BM_InterProbBothRoutes);

void BM_GenerateInstruction(benchmark::State& state) {
    mapl::Rng corpus_rng(7);
    const auto corpus = mapl::generate_synthetic_corpus(1, corpus_rng);
    const mapl::ConditionedArg args[2] = {{corpus[0].chosen, true}, {corpus[0].rejected, false}};
    mapl::Rng rng(11);
    for (auto _ : state) {
        auto outcome =
            mapl::generate_instruction(mapl::Family::min_words, args, mapl::default_lexicon(), rng);
        benchmark::DoNotOptimize(outcome);
    }
}
BENCHMARK(BM_GenerateInstruction);

void BM_SynthesizeIntra(benchmark::State& state) {
    mapl::Rng corpus_rng(7);
    const auto corpus = mapl::generate_synthetic_corpus(1, corpus_rng);
    const mapl::SynthesisConfig cfg;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        mapl::Rng rng(seed++);
        auto pair = mapl::synthesize_intra(corpus[0], cfg, rng);
        benchmark::DoNotOptimize(pair);
    }
}
BENCHMARK(BM_SynthesizeIntra);

void BM_VerifyThroughput(benchmark::State& state) {
    mapl::Rng corpus_rng(7);
    const auto corpus = mapl::generate_synthetic_corpus(1, corpus_rng);
    const auto spec = mapl::make_spec(mapl::Family::keyword_frequency, 1, "bo0");
    for (auto _ : state) {
        benchmark::DoNotOptimize(mapl::verify(spec, corpus[0].chosen));
    }
}
BENCHMARK(BM_VerifyThroughput);

}  // namespace

BENCHMARK_MAIN();
