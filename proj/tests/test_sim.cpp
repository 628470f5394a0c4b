#include "support.hpp"
#include "zkfaith/sim.hpp"

using namespace zkfaith;

TEST(Sim, Registry) {
    EXPECT_GE(strategies().size(), 13u);
    EXPECT_EQ(find_strategy("honest").expected, Expect::accept);
    EXPECT_EQ(find_strategy("forged-doc").expected, Expect::reject);
    EXPECT_THROW(find_strategy("bribe-the-verifier"), UsageError);
}

TEST(Sim, SampledDocumentsAreValid) {
    const auto& reg = SchemaRegistry::builtin();
    Rng rng = Rng::from_u64(100);
    for (const auto& id : reg.ids()) {
        const auto& s = reg.get(id);
        for (int i = 0; i < 200; ++i) {
            auto d = sample_document(s, "w", rng);
            auto v = validate(d, s, kSimToday);
            ASSERT_TRUE(v.ok) << id << ": " << v.problem;
        }
        auto crit = sample_criteria(s, "v");
        ASSERT_EQ(crit.size(), 3u);
        for (const auto& c : crit) EXPECT_NO_THROW(c.check(s));
        EXPECT_TRUE(crit[0].disclose.empty() && crit[0].predicates.empty());
        EXPECT_EQ(crit[2].predicates.size(), 2u) << id;
    }
}

TEST(Sim, EveryStrategyMeetsItsExpectation) {
    auto pp = test::mock_big();
    for (const auto& s : strategies()) {
        auto r = run_upriv_experiment(pp, s.id, 6, 101);
        EXPECT_TRUE(r.pass) << r.report_line();
        EXPECT_GT(r.attempts, 0u) << s.id;
        if (s.expected == Expect::reject) {
            EXPECT_EQ(r.accepts, 0u) << s.id;
        }
    }
}

TEST(Sim, HonestBaseline) {
    auto r = run_upriv_experiment(test::mock_big(), "honest", 50, 102);
    EXPECT_EQ(r.accepts, 50u);
    EXPECT_EQ(r.attempts, 50u);
}

TEST(Sim, ForgedDocHundredTrials) {
    auto r = run_upriv_experiment(test::mock_big(), "forged-doc", 100, 103);
    EXPECT_EQ(r.accepts, 0u);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.outcomes.count("accepted"), 0u);
}

TEST(Sim, ReproducibleUnderSeed) {
    auto pp = test::mock_big();
    auto a = run_upriv_experiment(pp, "transcript-splicing", 4, 104);
    auto b = run_upriv_experiment(pp, "transcript-splicing", 4, 104, 3);
    auto c = run_upriv_experiment(pp, "transcript-splicing", 4, 105);
    EXPECT_EQ(a.digest, b.digest);
    EXPECT_EQ(a.report_line(), b.report_line());
    EXPECT_NE(a.digest, c.digest);
}

TEST(Sim, ReportLine) {
    auto r = run_upriv_experiment(test::mock_big(), "replayed-nonce", 2, 106);
    auto line = r.report_line();
    EXPECT_EQ(line.rfind("strategy=replayed-nonce trials=2 attempts=6 accepts=0 expected=reject digest=", 0), 0u) << line;
    EXPECT_EQ(line.substr(line.size() - 5), " PASS");
}

TEST(Sim, UnlinkabilityMock) {
    auto rep = run_unlinkability_trial(test::mock_big(), 100, 107);
    EXPECT_EQ(rep.collisions, 0u);
    EXPECT_TRUE(rep.same_shape);
    EXPECT_TRUE(rep.pass) << rep.report_line();
}

TEST(Sim, CurveSpotCheck) {
    auto pp = test::curve();
    for (const char* id : {"honest", "wid-mismatch", "forged-signature", "stale-epoch"}) {
        auto r = run_upriv_experiment(pp, id, 1, 108);
        EXPECT_TRUE(r.pass) << r.report_line();
    }
    auto rep = run_unlinkability_trial(pp, 10, 109);
    EXPECT_EQ(rep.collisions, 0u);
    EXPECT_TRUE(rep.same_shape);
}
