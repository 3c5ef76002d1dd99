// Command-line driver: fixture inspection, torsion-rank verification, field
// certification, enumeration, class-group queries, Scholz sweeps.

#include "rank3/jacobian.hpp"
#include "rank3/specialize.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace rank3;

namespace {

FactorBudget budget_from_env() {
    FactorBudget b;
    if (const char* s = std::getenv("RANK3_TRIAL_BOUND")) b.trial_bound = std::strtoull(s, nullptr, 10);
    if (const char* s = std::getenv("RANK3_RHO_ITERS")) b.rho_iters = std::strtoull(s, nullptr, 10);
    if (const char* s = std::getenv("RANK3_MR_REPS")) b.mr_reps = std::atoi(s);
    return b;
}

// hints file: one line per integer, whitespace-separated: <n> <p1> <p2> ...
std::vector<Int> read_hints(const std::string& path) {
    std::vector<Int> hints;
    if (path.empty()) return hints;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open hints file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tok;
        bool first = true;
        while (ss >> tok) {
            if (first) {  // leading value identifies the target; only the primes matter here
                first = false;
                continue;
            }
            hints.emplace_back(tok);
        }
    }
    return hints;
}

CurveFixture load_from_flags(const std::string& label, const std::string& a, const std::string& b) {
    std::vector<Rat> params;
    if (!a.empty()) params.push_back(parse_rat(a));
    if (!b.empty()) params.push_back(parse_rat(b));
    CurveFixture fx = load_fixture(label, params);
    verify_fixture(fx);
    return fx;
}

int cmd_verify_torsion(const CurveFixture& fx, int prime_count) {
    auto reports = rank_at_good_primes(fx, prime_count);
    std::cout << "curve " << fx.label << "  degree " << fx.f.degree() << "  genus " << fx.genus()
              << "  classes " << fx.points.size() << "\n";
    int rank = -1;
    bool agree = true;
    for (const auto& rep : reports) {
        std::cout << "  p = " << rep.p << ": rank " << rep.rank;
        for (const auto& rel : rep.relations) {
            std::cout << "  relation (";
            for (size_t i = 0; i < rel.size(); ++i) std::cout << (i ? "," : "") << rel[i];
            std::cout << ")";
        }
        std::cout << "\n";
        if (rank < 0) rank = rep.rank;
        agree = agree && rep.rank == rank;
    }
    if (!agree || reports.empty()) {
        std::cout << "ranks disagree across primes\n";
        return 2;
    }
    std::cout << "certified rank " << rank << " at " << reports.size() << " good primes\n";
    return 0;
}

void print_certificate(const RankCertificate& c, bool as_json) {
    if (as_json) {
        std::cout << c.to_json() << "\n";
        return;
    }
    std::cout << "fixture " << c.fixture << "  t = " << to_string(c.t) << "\n";
    std::cout << "m = " << to_string(c.m) << "\nD = " << to_string(c.D) << "  (" << c.level
              << " level)\nrank " << c.rank << "\n";
    for (size_t i = 0; i < c.forms.size(); ++i)
        std::cout << "  F" << i + 1 << " = (" << to_string(c.forms[i].a) << ", "
                  << to_string(c.forms[i].b) << ", " << to_string(c.forms[i].c) << ")  [point "
                  << c.point_indices[i] << "]\n";
    for (const auto& l : c.transcript) std::cout << "  " << l << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"3-rank certification for class groups of quadratic fields"};
    app.require_subcommand(1);

    std::string curve = "f3", a_param, b_param, t_str, hints_path, store_path = "certificates.jsonl";
    std::string D_str, format;
    long height = 200;
    int prime_count = 2, min_rank = 1;
    double wall = 0;
    long sweep_max = 2000;
    bool as_json = false;

    auto add_curve_flags = [&](CLI::App* sub) {
        sub->add_option("--curve", curve, "fixture label (f1, f2, f3, f4, f5, sec7)");
        sub->add_option("--a", a_param, "family parameter a");
        sub->add_option("--b", b_param, "family parameter b");
    };

    auto* fx_cmd = app.add_subcommand("fixtures", "print a fixture in its text format");
    add_curve_flags(fx_cmd);

    auto* vt = app.add_subcommand("verify-torsion", "certify Jacobian 3-rank at good primes");
    add_curve_flags(vt);
    vt->add_option("--primes", prime_count, "number of good primes (default 2)");

    auto* ct = app.add_subcommand("certify", "certify the 3-rank of one specialization");
    add_curve_flags(ct);
    ct->add_option("--t", t_str, "specialization value (rational)")->required();
    ct->add_option("--hints", hints_path, "factor hints file");
    ct->add_option("--min-rank", min_rank, "exit 0 only if certified rank reaches this");
    ct->add_flag("--json", as_json, "print the certificate as JSON");

    auto* en = app.add_subcommand("enumerate", "sweep specializations and store certificates");
    add_curve_flags(en);
    en->add_option("--height", height, "height bound B");
    en->add_option("--out", store_path, "certificate store (JSON lines, append)");
    en->add_option("--hints", hints_path, "factor hints file");
    en->add_option("--wall", wall, "wall-clock budget in seconds (0 = none)");
    en->add_option("--min-rank", min_rank, "store only certificates of at least this rank");

    auto* cg = app.add_subcommand("classgroup", "class group structure by brute force");
    cg->add_option("-D,--D", D_str, "negative fundamental-or-order discriminant")->required();

    auto* sch = app.add_subcommand("scholz-sweep", "Scholz reflection check over squarefree d");
    sch->add_option("--max", sweep_max, "upper bound for d");

    CLI11_PARSE(app, argc, argv);
    FactorBudget budget = budget_from_env();

    try {
        if (fx_cmd->parsed()) {
            std::cout << fixture_to_text(load_from_flags(curve, a_param, b_param));
            return 0;
        }
        if (vt->parsed()) return cmd_verify_torsion(load_from_flags(curve, a_param, b_param), prime_count);
        if (ct->parsed()) {
            auto fx = load_from_flags(curve, a_param, b_param);
            std::string why;
            auto cert = certify_field(fx, parse_rat(t_str), read_hints(hints_path), budget, &why);
            if (!cert) {
                std::cout << "skip: " << why << "\n";
                return 3;
            }
            print_certificate(*cert, as_json);
            return cert->level == "field" && cert->rank >= min_rank ? 0 : 3;
        }
        if (en->parsed()) {
            auto fx = load_from_flags(curve, a_param, b_param);
            auto sum = enumeration_harness(fx, Int(height), store_path, read_hints(hints_path),
                                           budget, wall, min_rank);
            std::cout << "candidates " << sum.candidates << ", certified " << sum.certified
                      << " new, skipped " << sum.skipped << "\n";
            for (const auto& [r, c] : sum.fields_per_rank)
                std::cout << "  distinct fields with rank >= " << r << ": " << c << "\n";
            std::map<size_t, long> decades;
            for (const auto& c : sum.fresh) ++decades[to_string(Int(-c.D)).size()];
            for (const auto& [dg, c] : decades)
                std::cout << "  new fields with " << dg << "-digit |D|: " << c << "\n";
            for (const auto& n : sum.notes) std::cout << "  note: " << n << "\n";
            return 0;
        }
        if (cg->parsed()) {
            auto g = class_group_small(Int(D_str));
            std::cout << "D = " << to_string(g.D) << "\nh = " << to_string(g.h()) << "\n";
            std::cout << "invariants:";
            for (const auto& d : g.elementary_divisors) std::cout << " Z/" << to_string(d);
            std::cout << "\n3-rank " << g.rank3 << "\n";
            return 0;
        }
        if (sch->parsed()) {
            long bad = 0, checked = 0;
            for (long d = 2; d <= sweep_max; ++d) {
                Int sf = squarefree_part(factor_integer(Int(d), {}, budget));
                if (sf != d) continue;
                int diff = scholz_check(Int(d));
                ++checked;
                if (diff != 0 && diff != 1) {
                    std::cout << "violation at d = " << d << ": difference " << diff << "\n";
                    ++bad;
                }
            }
            std::cout << checked << " squarefree d checked, " << bad << " violations\n";
            return bad == 0 ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
