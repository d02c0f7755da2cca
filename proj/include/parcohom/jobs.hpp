#pragma once

#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "parcohom/json_io.hpp"

namespace parcohom {

/// Error with the CLI exit-code classification: 64 schema, 1 computation,
/// 2 fixture mismatch.
struct JobError : std::runtime_error {
    int exit_code;
    JobError(int code, const std::string& msg) : std::runtime_error(msg), exit_code(code) {}
};

namespace detail {

inline void require_keys(const json& j, const std::set<std::string>& required,
                         const std::set<std::string>& optional, const std::string& what) {
    if (!j.is_object()) throw JobError(64, what + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (!required.count(k) && !optional.count(k))
            throw JobError(64, what + ": unknown field '" + k + "'");
    for (const std::string& k : required)
        if (!j.contains(k)) throw JobError(64, what + ": missing field '" + k + "'");
}

inline MonodromyTuple read_tuple(const json& j) {
    require_keys(j, {"rank_p", "points", "mats"}, {"pairing"}, "tuple");
    try {
        return tuple_from_json(j);
    } catch (const std::exception& e) {
        throw JobError(64, std::string("tuple: ") + e.what());
    }
}

inline std::vector<BraidWord> read_braids(const json& j) {
    std::vector<BraidWord> words;
    if (!j.is_array()) throw JobError(64, "braids: expected an array of strings");
    for (const json& w : j) {
        if (!w.is_string()) throw JobError(64, "braids: expected strings");
        try {
            words.push_back(parse_braid(w.get<std::string>()));
        } catch (const std::invalid_argument& e) {
            throw JobError(64, e.what());
        }
    }
    return words;
}

inline SignHints read_hints(const json& job, std::size_t nwords) {
    SignHints hints;
    if (job.contains("trace_targets")) {
        const json& t = job.at("trace_targets");
        if (!t.is_array() || t.size() != nwords)
            throw JobError(64, "trace_targets: expected one entry per braid");
        for (const json& v : t)
            hints.trace_targets.push_back(
                v.is_null() ? std::optional<Int>() : std::optional<Int>(int_from_json(v)));
    }
    if (job.contains("infinity_trace"))
        hints.infinity_trace = int_from_json(job.at("infinity_trace"));
    return hints;
}

inline json report_header(const std::string& kind, const json& job) {
    json rep;
    rep["library_version"] = version;
    rep["kind"] = kind;
    rep["job_hash"] = job_hash(job);
    return rep;
}

inline json invariants_json(const GramForm& q) {
    FormInvariants inv = form_invariants(q);
    json out;
    out["det"] = inv.det.str();
    out["disc"] = to_json(inv.disc);
    if (inv.sig) out["signature"] = json::array({inv.sig->first, inv.sig->second});
    return out;
}

inline json monodromy_json(const std::vector<IntMat>& etas) {
    json mats = json::array(), traces = json::array(), orders = json::array(),
         cps = json::array();
    for (const IntMat& e : etas) {
        mats.push_back(to_json(e));
        traces.push_back(trace(e).str());
        orders.push_back(to_json(matrix_order(e)));
        json cp = json::array();
        for (const Int& c : charpoly(e)) cp.push_back(c.str());
        cps.push_back(std::move(cp));
    }
    json out;
    out["matrices"] = std::move(mats);
    out["traces"] = std::move(traces);
    out["orders"] = std::move(orders);
    out["charpolys"] = std::move(cps);
    return out;
}

inline json split_json(const GramForm& q, const std::vector<IntMat>& etas) {
    SplitResult s = split(q, etas);
    json out;
    out["fixed_rank"] = s.fixed.rank();
    out["fixed"] = to_json(s.fixed);
    out["t_rank"] = s.T.rank();
    out["transcendental"] = to_json(s.T);
    out["t_gram"] = to_json(s.T_gram);
    out["hypothesis_ok"] = s.hypothesis_ok;
    InvariantReport rep = invariant_report(s.T_gram, s.T_monodromy);
    out["t_report"] = to_json(rep);
    json tm = json::array();
    for (const IntMat& m : s.T_monodromy) tm.push_back(to_json(m));
    out["t_monodromy"] = std::move(tm);
    return out;
}

}  // namespace detail

inline json run_compute(const json& job) {
    detail::require_keys(job, {"kind", "tuple"},
                         {"braids", "trace_targets", "infinity_trace", "split"},
                         "compute job");
    MonodromyTuple t = detail::read_tuple(job.at("tuple"));
    auto bad = validate(t);
    if (!bad.empty()) throw JobError(1, "invalid tuple: " + bad.front());
    ParabolicModule m = parabolic_cohomology(t);
    json rep = detail::report_header("compute", job);
    rep["rank"] = m.rank();
    json tors = json::array();
    for (const Int& d : m.torsion) tors.push_back(d.str());
    rep["torsion"] = std::move(tors);
    ExpectedRank er = expected_rank(t);
    rep["expected_rank"] = er.value;
    rep["stabilizer_trivial"] = er.stabilizer_trivial;
    std::optional<GramForm> q;
    if (t.pairing && m.rank() > 0) {
        q = gram_on_W(make_pairing_context(m, *t.pairing));
        rep["Q"] = to_json(*q);
        rep["invariants"] = detail::invariants_json(*q);
    }
    if (job.contains("braids")) {
        std::vector<BraidWord> words = detail::read_braids(job.at("braids"));
        SignHints hints = detail::read_hints(job, words.size());
        std::vector<IntMat> etas;
        try {
            etas = monodromy_on_W(m, words, &hints);
        } catch (const MonodromyError& e) {
            throw JobError(1, e.what());
        }
        rep["monodromy"] = detail::monodromy_json(etas);
        if (q) {
            for (const IntMat& e : etas)
                if (!(e * q->mat * transpose(e) == q->mat))
                    throw JobError(1, "monodromy does not preserve Q");
            IntMat prod = IntMat::identity(m.rank());
            for (const IntMat& e : etas) prod = prod * e;
            IntMat einf = unimodular_inverse(prod);
            rep["monodromy_at_infinity"] = to_json(einf);
            if (job.value("split", false)) {
                std::vector<IntMat> all = etas;
                all.push_back(einf);
                rep["split"] = detail::split_json(*q, all);
            }
        }
    }
    return rep;
}

inline json run_convolution(const json& job, bool hadamard) {
    detail::require_keys(job, {"kind", "tuple"},
                         hadamard ? std::set<std::string>{"fixed_slot", "trace_targets"}
                                  : std::set<std::string>{"trace_targets"},
                         "convolution job");
    MonodromyTuple t = detail::read_tuple(job.at("tuple"));
    std::optional<std::vector<std::optional<Int>>> targets;
    if (job.contains("trace_targets")) {
        targets.emplace();
        for (const json& v : job.at("trace_targets"))
            targets->push_back(v.is_null() ? std::optional<Int>()
                                           : std::optional<Int>(int_from_json(v)));
    }
    ConvolutionResult res;
    try {
        if (hadamard) {
            if (!job.contains("fixed_slot"))
                throw JobError(64, "mh job: missing field 'fixed_slot'");
            res = middle_hadamard(t, job.at("fixed_slot").get<std::size_t>(),
                                  targets ? &*targets : nullptr);
        } else {
            res = middle_convolution(t, targets ? &*targets : nullptr);
        }
    } catch (const JobError&) {
        throw;
    } catch (const std::exception& e) {
        throw JobError(1, e.what());
    }
    json rep = detail::report_header(hadamard ? "mh" : "mc", job);
    rep["rank"] = res.module.rank();
    json tors = json::array();
    for (const Int& d : res.module.torsion) tors.push_back(d.str());
    rep["torsion"] = std::move(tors);
    rep["Q"] = to_json(res.Q);
    rep["invariants"] = detail::invariants_json(res.Q);
    rep["monodromy"] = detail::monodromy_json(res.monodromy);
    rep["twisted_tuple"] = to_json(res.twisted);
    rep["signs_defaulted"] = res.signs_defaulted;
    json checks = json::array();
    for (const LocalTypeCheck& c : verify_local_types(res)) {
        json cj;
        cj["point"] = c.point;
        cj["checked"] = c.checked;
        if (c.checked) {
            cj["predicted"] = c.predicted;
            cj["matched"] = c.matched;
        }
        checks.push_back(std::move(cj));
    }
    rep["local_types"] = std::move(checks);
    return rep;
}

inline json run_twist(const json& job) {
    detail::require_keys(job, {"kind", "tuple", "fixed_index"}, {"moving_position"},
                         "twist job");
    MonodromyTuple t = detail::read_tuple(job.at("tuple"));
    std::size_t moving = job.value("moving_position", 0);
    MonodromyTuple tw;
    try {
        tw = twist_tuple(t, job.at("fixed_index").get<std::size_t>(), moving);
    } catch (const std::exception& e) {
        throw JobError(1, e.what());
    }
    json rep = detail::report_header("twist", job);
    rep["tuple"] = to_json(tw);
    json types = json::array();
    for (const IntMat& g : tw.mats) {
        auto k = sl2_local_type(g);
        types.push_back(k ? to_string(*k) : "?");
    }
    rep["types"] = std::move(types);
    json er = json::object();
    ExpectedRank e = expected_rank(tw);
    er["value"] = e.value;
    er["stabilizer_trivial"] = e.stabilizer_trivial;
    rep["expected_rank"] = std::move(er);
    return rep;
}

inline json run_kodaira(const json& job) {
    detail::require_keys(job, {"kind", "orders"}, {}, "kodaira job");
    const json& o = job.at("orders");
    if (!o.is_array() || o.size() != 3)
        throw JobError(64, "kodaira job: orders must be [ord_g2, ord_g3, ord_delta]");
    KodairaFiber f;
    try {
        f = kodaira_classify(o[0].get<long>(), o[1].get<long>(), o[2].get<long>());
    } catch (const std::exception& e) {
        throw JobError(1, e.what());
    }
    json rep = detail::report_header("kodaira", job);
    rep["type"] = to_string(f);
    rep["euler"] = euler_number(f);
    rep["local_monodromy"] = to_json(local_monodromy(f));
    rep["twist"] = to_string(twist_fiber(f));
    return rep;
}

inline json run_split_job(const json& job) {
    detail::require_keys(job, {"kind", "q", "monodromies"}, {}, "split job");
    GramForm q;
    try {
        q = gram_from_json(job.at("q"));
    } catch (const std::exception& e) {
        throw JobError(64, std::string("q: ") + e.what());
    }
    std::vector<IntMat> mats;
    for (const json& m : job.at("monodromies")) mats.push_back(intmat_from_json(m, q.dim()));
    json rep = detail::report_header("split", job);
    try {
        rep["split"] = detail::split_json(q, mats);
    } catch (const std::exception& e) {
        throw JobError(1, e.what());
    }
    return rep;
}

// ---------------- fixtures ----------------------------------------------------

struct FixtureOutcome {
    std::string id;
    bool pass = true;
    std::vector<std::string> mismatches;
};

namespace detail {

inline void expect_eq(FixtureOutcome& out, const std::string& what, const json& got,
                      const json& want) {
    if (got != want) {
        out.pass = false;
        out.mismatches.push_back(what + ": got " + got.dump() + ", want " + want.dump());
    }
}

}  // namespace detail

/// Data self-check: the printed matrices satisfy the ordered product
/// identity, preserve the printed pairing, and have the printed invariants.
inline FixtureOutcome run_self_check(const json& c) {
    detail::require_keys(c, {"id", "source", "mats", "expect"}, {"q"}, "self check");
    FixtureOutcome out;
    out.id = c.at("id").get<std::string>();
    std::vector<IntMat> mats;
    for (const json& m : c.at("mats")) mats.push_back(intmat_from_json(m));
    const json& expect = c.at("expect");
    std::size_t d = mats.empty() ? 0 : mats[0].rows();
    if (expect.value("product_identity", false)) {
        IntMat p = IntMat::identity(d);
        for (const IntMat& m : mats) p = p * m;
        detail::expect_eq(out, "product identity", p == IntMat::identity(d), true);
    }
    if (expect.value("unimodular", false)) {
        bool uni = true;
        for (const IntMat& m : mats)
            if (abs_int(det(m)) != 1) uni = false;
        detail::expect_eq(out, "unimodular", uni, true);
    }
    if (c.contains("q")) {
        GramForm q = gram_from_json(c.at("q"));
        if (expect.value("preserve_q", false)) {
            bool ok = true;
            for (const IntMat& m : mats)
                if (!(m * q.mat * transpose(m) == q.mat)) ok = false;
            detail::expect_eq(out, "preserve_q", ok, true);
        }
        if (expect.contains("det_q"))
            detail::expect_eq(out, "det_q", det(q.mat).str(), expect.at("det_q"));
        if (expect.contains("disc_q"))
            detail::expect_eq(out, "disc_q", to_json(discriminant_group(q.mat)),
                              expect.at("disc_q"));
        if (expect.contains("signature")) {
            auto [p, n] = signature(q);
            detail::expect_eq(out, "signature", json::array({p, n}),
                              expect.at("signature"));
        }
    }
    if (expect.contains("types")) {
        json types = json::array();
        for (const IntMat& m : mats) {
            auto k = sl2_local_type(m);
            types.push_back(k ? to_string(*k) : "?");
        }
        detail::expect_eq(out, "types", types, expect.at("types"));
    }
    if (expect.contains("traces")) {
        json traces = json::array();
        for (const IntMat& m : mats) traces.push_back(trace(m).str());
        detail::expect_eq(out, "traces", traces, expect.at("traces"));
    }
    if (expect.contains("orders")) {
        json orders = json::array();
        for (const IntMat& m : mats) orders.push_back(to_json(matrix_order(m)));
        detail::expect_eq(out, "orders", orders, expect.at("orders"));
    }
    return out;
}

/// Pipeline fixture: run the job and compare the computed invariants.
inline FixtureOutcome run_case(const json& c) {
    detail::require_keys(c, {"id", "source", "job", "expect"}, {}, "fixture case");
    FixtureOutcome out;
    out.id = c.at("id").get<std::string>();
    const json& job = c.at("job");
    std::string kind = job.at("kind").get<std::string>();
    json rep;
    if (kind == "compute")
        rep = run_compute(job);
    else if (kind == "mh")
        rep = run_convolution(job, true);
    else if (kind == "mc")
        rep = run_convolution(job, false);
    else
        throw JobError(64, "fixture job kind '" + kind + "' not recognized");
    const json& expect = c.at("expect");
    if (expect.contains("rank"))
        detail::expect_eq(out, "rank", rep.at("rank"), expect.at("rank"));
    if (expect.contains("torsion"))
        detail::expect_eq(out, "torsion", rep.at("torsion"), expect.at("torsion"));
    if (expect.contains("det"))
        detail::expect_eq(out, "det", rep.at("invariants").at("det"), expect.at("det"));
    if (expect.contains("disc"))
        detail::expect_eq(out, "disc", rep.at("invariants").at("disc"), expect.at("disc"));
    if (expect.contains("signature"))
        detail::expect_eq(out, "signature", rep.at("invariants").at("signature"),
                          expect.at("signature"));
    if (expect.contains("orders"))
        detail::expect_eq(out, "orders", rep.at("monodromy").at("orders"),
                          expect.at("orders"));
    if (expect.contains("traces"))
        detail::expect_eq(out, "traces", rep.at("monodromy").at("traces"),
                          expect.at("traces"));
    if (expect.contains("charpolys_projective")) {
        const json& want = expect.at("charpolys_projective");
        const json& got = rep.at("monodromy").at("charpolys");
        bool ok = got.size() == want.size();
        for (std::size_t i = 0; ok && i < got.size(); ++i) {
            // projective comparison: the charpoly of M or of -M must match
            std::vector<Int> cp;
            for (const json& v : got[i]) cp.push_back(Int(v.get<std::string>()));
            std::vector<Int> flipped = cp;
            for (std::size_t k = 1; k < flipped.size(); k += 2)
                flipped[k] = -flipped[k];
            std::vector<Int> w;
            for (const json& v : want[i]) w.push_back(Int(v.get<std::string>()));
            ok = (cp == w) || (flipped == w);
        }
        detail::expect_eq(out, "charpolys_projective", ok, true);
    }
    if (expect.contains("eta_inf")) {
        IntMat einf = intmat_from_json(kind == "compute"
                                           ? rep.at("monodromy_at_infinity")
                                           : rep.at("monodromy").at("matrices").back());
        std::size_t d = einf.rows();
        if (expect.at("eta_inf") == "minus_identity")
            detail::expect_eq(out, "eta_inf", einf == -IntMat::identity(d), true);
        else if (expect.at("eta_inf") == "identity")
            detail::expect_eq(out, "eta_inf", einf == IntMat::identity(d), true);
    }
    if (expect.contains("fixed_rank")) {
        const json& sp = rep.at("split");
        detail::expect_eq(out, "fixed_rank", sp.at("fixed_rank"), expect.at("fixed_rank"));
        detail::expect_eq(out, "t_rank", sp.at("t_rank"), expect.at("t_rank"));
        const json& tr = sp.at("t_report");
        if (expect.contains("t_det"))
            detail::expect_eq(out, "t_det", tr.at("det"), expect.at("t_det"));
        if (expect.contains("t_disc"))
            detail::expect_eq(out, "t_disc", tr.at("disc"), expect.at("t_disc"));
        if (expect.contains("t_signature"))
            detail::expect_eq(out, "t_signature", tr.at("signature"),
                              expect.at("t_signature"));
        if (expect.contains("t_traces"))
            detail::expect_eq(out, "t_traces", tr.at("traces"), expect.at("t_traces"));
        if (expect.contains("t_orders"))
            detail::expect_eq(out, "t_orders", tr.at("orders"), expect.at("t_orders"));
    }
    return out;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw JobError(64, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw JobError(64, std::string("json parse: ") + e.what());
    }
    return j;
}

struct FixtureSummary {
    std::vector<FixtureOutcome> outcomes;
    std::size_t failures = 0;
};

/// Run every matching fixture. Cases run in parallel (each single-threaded)
/// and the results are merged back in dataset order.
inline FixtureSummary run_fixtures(const json& dataset, const std::string& filter = "") {
    detail::require_keys(dataset, {"version", "self_checks", "cases"}, {}, "dataset");
    auto matches = [&](const json& c) {
        return filter.empty() ||
               c.at("id").get<std::string>().find(filter) != std::string::npos;
    };
    std::vector<std::future<FixtureOutcome>> running;
    for (const json& c : dataset.at("self_checks"))
        if (matches(c))
            running.push_back(std::async(std::launch::async,
                                         [&c] { return run_self_check(c); }));
    for (const json& c : dataset.at("cases"))
        if (matches(c))
            running.push_back(std::async(std::launch::async,
                                         [&c] { return run_case(c); }));
    FixtureSummary sum;
    for (auto& f : running) sum.outcomes.push_back(f.get());
    for (const FixtureOutcome& o : sum.outcomes)
        if (!o.pass) ++sum.failures;
    return sum;
}

}  // namespace parcohom
