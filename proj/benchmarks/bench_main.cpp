#include <benchmark/benchmark.h>

#include "mbs/catalog.hpp"
#include "mbs/detect.hpp"
#include "mbs/histories.hpp"
#include "mbs/model_io.hpp"

#include <random>

using namespace mbs;

namespace {

// worst-case finitary search: pairwise space-like points over the free
// family, one constraint per point, everything satisfiable
TransitionSet slr_row(long n) {
    static CatalogProduct p = gen_lattice(16);
    TransitionSet T;
    T.model = p.model.get();
    T.family = p.model->family;
    Scenario ones;
    for (long i = 0; i < n; ++i) {
        TransitionPoint pt;
        pt.id = "s" + std::to_string(i);
        pt.site = i;
        Point4 loc = p.model->sites.site(i);
        pt.loc = loc;
        pt.rep = ones;
        EventClass e = event_class(*p.model, loc, ones);
        pt.histories = e.members;
        pt.cells = elementary_possibilities(*p.model, e);
        pt.chosen = 0;
        T.pts.push_back(std::move(pt));
    }
    return T;
}

void bm_finfb_row(benchmark::State& state) {
    TransitionSet T = slr_row(state.range(0));
    for (auto _ : state) {
        FinfbResult r = check_finfb(T);
        benchmark::DoNotOptimize(r.funny);
    }
}

void bm_finfb_row_unpruned(benchmark::State& state) {
    TransitionSet T = slr_row(state.range(0));
    for (auto _ : state) {
        FinfbResult r = check_finfb(T, 1, false);
        benchmark::DoNotOptimize(r.funny);
    }
}

void bm_event_class_wrapped(benchmark::State& state) {
    CatalogProduct p = gen_wrapped(state.range(0));
    Scenario ones;
    Point4 probe(1, 0, 0, 0);
    for (auto _ : state) {
        EventClass e = event_class(*p.model, probe, ones);
        benchmark::DoNotOptimize(e.members.cs.contradictory);
    }
}

void bm_gen_wrapped(benchmark::State& state) {
    for (auto _ : state) {
        CatalogProduct p = gen_wrapped(state.range(0));
        benchmark::DoNotOptimize(p.model->sites.sample_count());
    }
}

void bm_overlap_lw1(benchmark::State& state) {
    CatalogProduct p = gen_lw1(state.range(0));
    Scenario a = p.model->scenario("a"), b = p.model->scenario("b");
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<long> num(-8, 8);
    for (auto _ : state) {
        Point4 x(make_rat(num(rng), 4), make_rat(num(rng), 4), 0, 0);
        benchmark::DoNotOptimize(splitting_below(*p.model, x, a, b).any);
    }
}

void bm_sqrt_upper(benchmark::State& state) {
    Rat value = make_rat(state.range(0), 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(sqrt_upper_bound(value));
}

void bm_serialize(benchmark::State& state) {
    CatalogProduct p = gen_m2(state.range(0), "finitely-many-zeros");
    for (auto _ : state) {
        std::string text = serialize_model(*p.model);
        benchmark::DoNotOptimize(text.size());
    }
}

} // namespace

BENCHMARK(bm_finfb_row)->Arg(8)->Arg(12)->Arg(14);
BENCHMARK(bm_finfb_row_unpruned)->Arg(8)->Arg(12);
BENCHMARK(bm_event_class_wrapped)->Arg(8)->Arg(32);
BENCHMARK(bm_gen_wrapped)->Arg(8)->Arg(24);
BENCHMARK(bm_overlap_lw1)->Arg(8)->Arg(32);
BENCHMARK(bm_sqrt_upper)->Arg(2)->Arg(1000000);
BENCHMARK(bm_serialize)->Arg(32);

BENCHMARK_MAIN();
