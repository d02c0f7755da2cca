// Command-line front end: exact parabolic cohomology computations, middle
// convolutions of elliptic-surface monodromy, Kodaira classification, and
// the bundled regression fixtures.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "parcohom/jobs.hpp"
#include "parcohom/parcohom.hpp"

using namespace parcohom;

namespace {

std::string dataset_path() {
    if (const char* env = std::getenv("PARCOHOM_DATA")) return env;
#ifdef PARCOHOM_DATA_DIR
    return std::string(PARCOHOM_DATA_DIR) + "/fixtures.json";
#else
    return "data/fixtures.json";
#endif
}

std::string join(const json& arr, const char* sep) {
    std::string out;
    for (const json& v : arr) {
        if (!out.empty()) out += sep;
        out += v.is_string() ? v.get<std::string>() : v.dump();
    }
    return out;
}

/// Aligned plain-text rendering in the appendix column layout.
void render_table(const json& rep, std::ostream& os) {
    std::string kind = rep.value("kind", "?");
    os << "kind: " << kind << "   (library " << rep.value("library_version", "?")
       << ", job " << rep.value("job_hash", "?") << ")\n";
    if (kind == "kodaira") {
        os << "type: " << rep.at("type").get<std::string>()
           << "   euler: " << rep.at("euler") << "   twist: "
           << rep.at("twist").get<std::string>() << "\n";
        return;
    }
    if (rep.contains("rank")) os << "rank: " << rep.at("rank") << "\n";
    if (rep.contains("invariants")) {
        const json& inv = rep.at("invariants");
        os << "det(Q): " << inv.at("det").get<std::string>() << "   disc: ("
           << join(inv.at("disc"), ", ") << ")";
        if (inv.contains("signature"))
            os << "   signature: (" << inv.at("signature")[0] << ","
               << inv.at("signature")[1] << ")";
        os << "\n";
    }
    if (rep.contains("monodromy")) {
        os << std::left << std::setw(12) << "orders" << "| "
           << join(rep.at("monodromy").at("orders"), " ") << "\n";
        os << std::left << std::setw(12) << "traces" << "| "
           << join(rep.at("monodromy").at("traces"), " ") << "\n";
    }
    if (rep.contains("split")) {
        const json& sp = rep.at("split");
        os << "fixed rank: " << sp.at("fixed_rank") << "   T rank: " << sp.at("t_rank")
           << "\n";
        const json& tr = sp.at("t_report");
        os << "T det: " << tr.at("det").get<std::string>() << "   T disc: ("
           << join(tr.at("disc"), ", ") << ")";
        if (tr.contains("signature"))
            os << "   T signature: (" << tr.at("signature")[0] << ","
               << tr.at("signature")[1] << ")";
        os << "\n";
        os << std::left << std::setw(12) << "T orders" << "| "
           << join(tr.at("orders"), " ") << "\n";
        os << std::left << std::setw(12) << "T traces" << "| "
           << join(tr.at("traces"), " ") << "\n";
    }
    if (rep.contains("local_types")) {
        for (const json& c : rep.at("local_types"))
            if (c.value("checked", false))
                os << "local type at " << c.at("point").get<std::string>() << ": "
                   << (c.at("matched").get<bool>() ? "matches " : "MISMATCH ")
                   << c.at("predicted").get<std::string>() << "\n";
    }
}

int emit(const json& rep, const std::string& format, const std::string& out_path) {
    std::string text;
    if (format == "table") {
        std::ostringstream os;
        render_table(rep, os);
        text = os.str();
    } else {
        text = canonical_dump(rep);
    }
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        out << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parcohom: parabolic cohomology of local systems on the "
                 "punctured sphere, braid monodromy, middle convolutions and "
                 "transcendental lattices, in exact arithmetic"};
    app.require_subcommand(1);
    app.fallthrough();  // --format after a subcommand reaches the parent
    std::string format = "json", out_path;
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
    app.add_option("-o,--output", out_path, "write the report to a file");

    auto* run = app.add_subcommand("run", "run a job file");
    std::string job_path;
    run->add_option("job", job_path, "job JSON file")->required();

    auto* fixtures = app.add_subcommand("fixtures", "run the bundled regression fixtures");
    std::string filter;
    fixtures->add_option("--filter", filter, "only fixtures whose id contains this");

    auto* kod = app.add_subcommand("kodaira", "classify a fibre from vanishing orders");
    std::string orders;
    kod->add_option("--orders", orders, "ord(g2),ord(g3),ord(Delta)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            json job = load_json_file(job_path);
            if (!job.is_object() || !job.contains("kind"))
                throw JobError(64, "job: missing 'kind'");
            std::string kind = job.at("kind").get<std::string>();
            json rep;
            if (kind == "compute")
                rep = run_compute(job);
            else if (kind == "mc")
                rep = run_convolution(job, false);
            else if (kind == "mh")
                rep = run_convolution(job, true);
            else if (kind == "twist")
                rep = run_twist(job);
            else if (kind == "kodaira")
                rep = run_kodaira(job);
            else if (kind == "split")
                rep = run_split_job(job);
            else if (kind == "validate-table") {
                detail::require_keys(job, {"kind"}, {"dataset", "filter"}, "validate-table");
                json data = load_json_file(job.value("dataset", dataset_path()));
                FixtureSummary sum = run_fixtures(data, job.value("filter", ""));
                rep = detail::report_header("validate-table", job);
                json rows = json::array();
                for (const FixtureOutcome& o : sum.outcomes) {
                    json r{{"id", o.id}, {"pass", o.pass}};
                    if (!o.pass) r["mismatches"] = o.mismatches;
                    rows.push_back(std::move(r));
                }
                rep["results"] = std::move(rows);
                rep["failures"] = sum.failures;
                emit(rep, format, out_path);
                return sum.failures ? 2 : 0;
            } else {
                throw JobError(64, "unknown job kind '" + kind + "'");
            }
            return emit(rep, format, out_path);
        }
        if (*fixtures) {
            json data = load_json_file(dataset_path());
            FixtureSummary sum = run_fixtures(data, filter);
            for (const FixtureOutcome& o : sum.outcomes) {
                std::cout << (o.pass ? "pass  " : "FAIL  ") << o.id << "\n";
                for (const std::string& m : o.mismatches) std::cout << "      " << m << "\n";
            }
            std::cout << sum.outcomes.size() << " fixtures, " << sum.failures
                      << " failures\n";
            return sum.failures ? 2 : 0;
        }
        if (*kod) {
            long a, b, c;
            if (std::sscanf(orders.c_str(), "%ld,%ld,%ld", &a, &b, &c) != 3)
                throw JobError(64, "--orders expects three comma-separated integers");
            json job{{"kind", "kodaira"}, {"orders", json::array({a, b, c})}};
            return emit(run_kodaira(job), format, out_path);
        }
    } catch (const JobError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
