#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "parcohom/jobs.hpp"

using namespace parcohom;
using namespace parcohom::testing;

namespace {

json family1_job() {
    json job;
    job["kind"] = "compute";
    job["tuple"] = to_json(family1_tuple());
    job["braids"] = json::array({"b2^2", "b2^-1 b1^4 b2", "b2^-1 b1^-2 b2^2 b1^2 b2"});
    return job;
}

}  // namespace

TEST_CASE("compute job on Family 1") {
    json rep = run_compute(family1_job());
    CHECK(rep.at("rank") == 2);
    CHECK(rep.at("invariants").at("det") == "3");
    CHECK(rep.at("invariants").at("disc") == json::array({"3"}));
    CHECK(rep.at("library_version") == std::string(version));
    CHECK(rep.at("monodromy").at("matrices").size() == 3);
}

TEST_CASE("reports are byte-identical across reruns") {
    json a = run_compute(family1_job());
    json b = run_compute(family1_job());
    CHECK(canonical_dump(a) == canonical_dump(b));
    CHECK(a.at("job_hash") == b.at("job_hash"));
}

TEST_CASE("schema violations exit with code 64") {
    SECTION("malformed braid string names the offset") {
        json job = family1_job();
        job["braids"][1] = "b2 * x3";
        try {
            run_compute(job);
            FAIL("expected JobError");
        } catch (const JobError& e) {
            CHECK(e.exit_code == 64);
            CHECK(std::string(e.what()).find("offset") != std::string::npos);
        }
    }
    SECTION("unknown fields are rejected") {
        json job = family1_job();
        job["frobnicate"] = true;
        try {
            run_compute(job);
            FAIL("expected JobError");
        } catch (const JobError& e) {
            CHECK(e.exit_code == 64);
        }
    }
    SECTION("missing fields are rejected") {
        json job{{"kind", "mh"}, {"tuple", to_json(family1_tuple())}};
        try {
            run_convolution(job, true);
            FAIL("expected JobError");
        } catch (const JobError& e) {
            CHECK(e.exit_code == 64);
        }
    }
}

TEST_CASE("computation failures exit with code 1") {
    json job = family1_job();
    json broken = to_json(family1_tuple());
    broken["mats"][0] = to_json(IntMat{{1, 1}, {1, 1}});  // det 0
    job["tuple"] = broken;
    try {
        run_compute(job);
        FAIL("expected JobError");
    } catch (const JobError& e) {
        CHECK(e.exit_code == 1);
    }
}

TEST_CASE("kodaira job") {
    json job{{"kind", "kodaira"}, {"orders", json::array({0, 0, 5})}};
    json rep = run_kodaira(job);
    CHECK(rep.at("type") == "I5");
    CHECK(rep.at("euler") == 5);
    CHECK(rep.at("twist") == "I5*");
    json bad{{"kind", "kodaira"}, {"orders", json::array({4, 6, 12})}};
    try {
        run_kodaira(bad);
        FAIL("expected JobError");
    } catch (const JobError& e) {
        CHECK(e.exit_code == 1);  // non-minimal is a computation-domain error
    }
}

TEST_CASE("twist job") {
    json job{{"kind", "twist"}, {"tuple", to_json(family1_tuple())},
             {"fixed_index", 1}, {"moving_position", 0}};
    json rep = run_twist(job);
    CHECK(rep.at("types") == json::array({"I0*", "I1", "IV*", "IV*", "I1"}));
    CHECK(rep.at("expected_rank").at("value") == 4);
}

TEST_CASE("split job on the printed N=5 data") {
    json q = to_json(make_gram(IntMat{{12, -4, 4, 4}, {-4, 2, -2, -2},
                                      {4, -2, -4, -1}, {4, -2, -1, 0}},
                               Symmetry::symmetric));
    json mon = json::array();
    mon.push_back(to_json(IntMat{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0},
                                 {0, -1, 1, -1}}));
    mon.push_back(to_json(IntMat{{-3, 0, 0, 4}, {0, -1, 0, 0}, {-3, -1, 1, 3},
                                 {-2, 0, 0, 3}}));
    mon.push_back(to_json(IntMat{{-3, -4, -8, 20}, {4, 5, 8, -20}, {-1, -1, -1, 5},
                                 {0, 0, 0, 1}}));
    mon.push_back(to_json(IntMat{{-7, -12, 16, -24}, {4, 7, -12, 20},
                                 {-4, -6, 7, -8}, {-2, -3, 3, -3}}));
    json job{{"kind", "split"}, {"q", q}, {"monodromies", mon}};
    json rep = run_split_job(job);
    CHECK(rep.at("split").at("fixed_rank") == 1);
    CHECK(rep.at("split").at("t_rank") == 3);
    CHECK(rep.at("split").at("t_report").at("det") == "-10");
}

TEST_CASE("bundled fixtures all pass") {
    std::string path = std::string(PARCOHOM_DATA_DIR) + "/fixtures.json";
    json data = load_json_file(path);
    FixtureSummary sum = run_fixtures(data);
    for (const FixtureOutcome& o : sum.outcomes)
        for (const std::string& m : o.mismatches)
            UNSCOPED_INFO(o.id + ": " + m);
    CHECK(sum.failures == 0);
    CHECK(sum.outcomes.size() >= 20);
    SECTION("filtering") {
        FixtureSummary filtered = run_fixtures(data, "family1");
        CHECK(filtered.outcomes.size() == 1);
        FixtureSummary none = run_fixtures(data, "no-such-case");
        CHECK(none.outcomes.empty());
        CHECK(none.failures == 0);
    }
    SECTION("mismatches are counted and described") {
        json doctored = data;
        for (json& c : doctored.at("cases"))
            if (c.at("id") == "family1-parabolic-cohomology")
                c["expect"]["det"] = "12";
        FixtureSummary sum2 = run_fixtures(doctored, "family1");
        REQUIRE(sum2.outcomes.size() == 1);
        CHECK(sum2.failures == 1);
        REQUIRE_FALSE(sum2.outcomes[0].mismatches.empty());
        CHECK(sum2.outcomes[0].mismatches[0].find("det") != std::string::npos);
    }
}
