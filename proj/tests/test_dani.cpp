#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "dioph/dani.hpp"

using namespace dioph;

namespace {

// deterministic 64-bit LCG (Knuth MMIX constants)
struct Lcg {
    unsigned long long s = 0x9e3779b97f4a7c15ull;
    unsigned long long next() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return s;
    }
    long uniform(long lo, long hi) {  // inclusive
        return lo + (long)(next() % (unsigned long long)(hi - lo + 1));
    }
};

}  // namespace

TEST_CASE("dani_forward examples") {
    // n=1, psi(s)=s^{-3}, x=49/100, v=1/2 (H=2)
    {
        PsiSpec spec = PsiSpec::power(1, Rat(3));
        auto res = dani_forward(spec, {Rat(49, 100)}, RationalPoint::from_vector({Int(2), Int(1)}));
        LogQuantity t_expect = LogQuantity::log_rational(2).scaled(Rat(3, 2));
        CHECK(compare(res.t.require_exact(), t_expect) == 0);
        LogQuantity norm_expect = LogQuantity::log_rational(2).scaled(Rat(-1, 2));
        CHECK(compare(res.norm_log.require_exact(), norm_expect) == 0);
        CHECK(res.e1_dominant);
        // guarantee: norm <= -t + log Psi^{-1}(e^t) = -t + log H
        LogQuantity bound = -t_expect + LogQuantity::log_rational(2);
        CHECK(compare(res.norm_log.require_exact(), bound) <= 0);
    }
    // x = v exactly: norm = e^{-t} H
    {
        PsiSpec spec = PsiSpec::power(1, Rat(3));
        auto res = dani_forward(spec, {Rat(1, 2)}, RationalPoint::from_vector({Int(2), Int(1)}));
        LogQuantity expect =
            -LogQuantity::log_rational(2).scaled(Rat(3, 2)) + LogQuantity::log_rational(2);
        CHECK(compare(res.norm_log.require_exact(), expect) == 0);
        CHECK(res.e1_dominant);
    }
    // n=2, psi(s)=s^{-2}, x=(1/3+1e-4, 2/3), v=(1/3, 2/3) (H=3)
    {
        PsiSpec spec = PsiSpec::power(2, Rat(2));
        std::vector<Rat> x{Rat(10003, 30000), Rat(2, 3)};
        RationalPoint v = RationalPoint::from_vector({Int(3), Int(1), Int(2)});
        auto res = dani_forward(spec, x, v);
        LogQuantity t_expect = LogQuantity::log_rational(3).scaled(Rat(4, 3));
        CHECK(compare(res.t.require_exact(), t_expect) == 0);
        CHECK(res.e1_dominant);
        LogQuantity bound = -t_expect + LogQuantity::log_rational(3);
        CHECK(compare(res.norm_log.require_exact(), bound) <= 0);
        // oracle: flow_norm_log agrees
        auto nr = flow_norm_log(x, 2, LogValue(t_expect), v.vec);
        CHECK(compare(res.norm_log.require_exact(), nr.norm_log.require_exact()) == 0);
    }
    // precondition violation
    {
        PsiSpec spec = PsiSpec::power(1, Rat(3));
        CHECK_THROWS_AS(
            dani_forward(spec, {Rat(0)}, RationalPoint::from_vector({Int(2), Int(1)})),
            PreconditionError);
    }
}

TEST_CASE("dani_backward examples") {
    PsiSpec spec = PsiSpec::power(1, Rat(3));
    // round-trip of the forward example
    {
        std::vector<Rat> x{Rat(49, 100)};
        RationalPoint v = RationalPoint::from_vector({Int(2), Int(1)});
        auto fwd = dani_forward(spec, x, v);
        auto back = dani_backward(spec, x, v.vec, fwd.t);
        REQUIRE(back.has_value());
        CHECK(back->vec == v.vec);
    }
    // w failing e1-dominance (or norm) at a large time -> none
    {
        LogValue t(LogQuantity::log_rational(Rat(1000)));
        auto back = dani_backward(spec, {Rat(1, 2)}, {Int(1), Int(0)}, t);
        CHECK(!back.has_value());
    }
    // w = (1,0) at t=0: norm max(1, 1/2) = 1 <= Psi^{-1}(1) = 1, tie-dominant
    {
        auto back =
            dani_backward(spec, {Rat(1, 2)}, {Int(1), Int(0)}, LogValue(LogQuantity::zero()));
        REQUIRE(back.has_value());
        CHECK(back->vec == IntVector{Int(1), Int(0)});
        // (b) inequalities: H <= Psi^{-1}(1) = 1, d = 1/2 <= psi(1) = 1
        CHECK(back->height() == 1);
    }
    CHECK_THROWS_AS(
        dani_backward(spec, {Rat(1, 2)}, {Int(0), Int(0)}, LogValue(LogQuantity::zero())),
        DomainError);
}

TEST_CASE("dani round trip property") {
    // 100 random (x, v) with d(x,v) <= psi(H(v)); backward returns a point
    // satisfying both Prop. (b) inequalities (not necessarily v itself)
    PsiSpec spec = PsiSpec::power(1, Rat(3));
    Lcg rng;
    int runs = 0;
    while (runs < 100) {
        long q = rng.uniform(2, 20);
        long p = rng.uniform(0, q);
        RationalPoint v = RationalPoint::from_vector({Int(q), Int(p)});
        if (v.height() < 2) continue;  // psi domain starts at s0 = 2
        Rat h(v.height());
        Rat psi_h = Rat(1) / (h * h * h);  // psi rational for integer lambda
        long num = rng.uniform(-4, 4);
        Rat x = v.value()[0] + psi_h * Rat(num, 8);  // |x - v| <= psi(H)/2
        auto fwd = dani_forward(spec, {x}, v);
        CHECK(fwd.e1_dominant);
        auto back = dani_backward(spec, {x}, v.vec, fwd.t);
        REQUIRE(back.has_value());
        // H(v') <= Psi^{-1}(e^t) = H(v)
        CHECK(back->height() <= v.height());
        Rat d = back->dist({x});
        Rat hb(back->height());
        CHECK(d <= Rat(1) / (hb * hb * hb));
        ++runs;
    }
}

TEST_CASE("trajectory examples and slope envelope") {
    PsiSpec spec = PsiSpec::power(1, Rat(3));
    Grid g(Int(4), 1);
    // x=0: c_x(lM) = -lM, witness (1,0)
    {
        auto samples = trajectory(spec, {Rat(0)}, g, 0, 5);
        REQUIRE(samples.size() == 6);
        for (const auto& s : samples) {
            LogQuantity expect = -GridTime(g, s.level).t();
            CHECK(compare(s.c_x, expect) == 0);
            CHECK(s.c_x.sign() <= 0);
            if (s.level >= 1) {  // at l=0 every unit vector ties; lex picks (0,1)
                CHECK(s.witness == IntVector{Int(1), Int(0)});
                CHECK(s.e1_dominant);
            }
        }
    }
    // x=1/2: equals per-level lambda_min_log
    {
        auto samples = trajectory(spec, {Rat(1, 2)}, g, 0, 3);
        REQUIRE(samples.size() == 4);
        for (const auto& s : samples) {
            FlowPoint fp{{Rat(1, 2)}, GridTime(g, s.level)};
            auto direct = successive_minima(fp, 1);
            CHECK(compare(s.c_x, direct.lambda_logs[0]) == 0);
            CHECK(s.c_x.sign() <= 0);
        }
    }
    // slope envelope: down at most M, up at most M/n
    {
        auto samples = trajectory(spec, {Rat(5, 8)}, g, 0, 10);
        LogQuantity m = g.step();
        for (size_t i = 1; i < samples.size(); ++i) {
            LogQuantity diff = samples[i].c_x - samples[i - 1].c_x;
            CHECK(compare(diff, -m) >= 0);
            CHECK(compare(diff, m) <= 0);  // n=1: up-slope M/n = M
        }
    }
    // CSV emitter
    {
        auto samples = trajectory(spec, {Rat(1, 2)}, g, 0, 2);
        std::ostringstream os;
        write_trajectory_csv(samples, os);
        std::istringstream is(os.str());
        std::string line;
        std::getline(is, line);
        CHECK(line == "level,t,c_x,r_psi,witness_q,witness_p1,e1_dominant");
        int rows = 0;
        while (std::getline(is, line)) ++rows;
        CHECK(rows == 3);
    }
}

TEST_CASE("classify examples") {
    // x=0: v=0 reported
    {
        PsiSpec spec = PsiSpec::power(1, Rat(3));
        auto rep = classify(spec, {Rat(0)}, Int(5), Rat(1));
        bool found = false;
        for (const auto& h : rep.hits)
            if (h.v.vec == IntVector{Int(1), Int(0)}) found = true;
        CHECK(found);
    }
    // x=1/2, psi=s^{-3}, c=1, H_max=10: exactly v=1/2 (heights below the
    // cutoff s0=2 only count with d=0, and q in 3..10 has |p/q-1/2| >= 1/(2q)
    // > q^{-3})
    {
        PsiSpec spec = PsiSpec::power(1, Rat(3));
        auto rep = classify(spec, {Rat(1, 2)}, Int(10), Rat(1));
        REQUIRE(rep.hits.size() == 1);
        CHECK(rep.hits[0].v.vec == IntVector{Int(2), Int(1)});
        CHECK(rep.hits[0].dist == 0);
    }
    // the scaling constant c matters: d(x, 1/2) = 1/100 < psi(2) = 1/8 but
    // not < (1/16) psi(2) = 1/128
    {
        PsiSpec spec = PsiSpec::power(1, Rat(3));
        std::vector<Rat> x{Rat(51, 100)};
        auto rep1 = classify(spec, x, Int(10), Rat(1));
        bool found = false;
        for (const auto& h : rep1.hits)
            if (h.v.vec == IntVector{Int(2), Int(1)}) found = true;
        CHECK(found);
        auto rep2 = classify(spec, x, Int(10), Rat(1, 16));
        for (const auto& h : rep2.hits) CHECK(h.v.vec != IntVector{Int(2), Int(1)});
    }
    // n=2 smoke: exact point reported
    {
        PsiSpec spec = PsiSpec::power(2, Rat(2));
        auto rep = classify(spec, {Rat(1, 3), Rat(2, 3)}, Int(6), Rat(1));
        bool found = false;
        for (const auto& h : rep.hits)
            if (h.v.vec == IntVector{Int(3), Int(1), Int(2)}) {
                found = true;
                CHECK(h.dist == 0);
            }
        CHECK(found);
        // deterministic (q, p)-lex order
        for (size_t i = 1; i < rep.hits.size(); ++i) {
            CHECK(rep.hits[i - 1].v.q() <= rep.hits[i].v.q());
        }
    }
}
