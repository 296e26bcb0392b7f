// rokhlin: classify product-type finite-group actions on UHF algebras
// and synthesize/verify Rokhlin projection families.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <rokhlin/json_io.hpp>

namespace {

using namespace rokhlin;

constexpr const char* kVersion = "0.1.0";

struct Options {
    std::string verb;
    std::string input;
    long long horizon = 0;
    std::string epsilon = "1/1000000";
    std::string block;
    std::string mode = "strict";
    std::string out;
    unsigned subgroup = 0;
    std::string family_file;  // verify: previously synthesized bundle
};

std::pair<long long, long long> parse_block(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw input_error("--block: expected n:m");
    try {
        long long n = std::stoll(s.substr(0, colon));
        long long m = std::stoll(s.substr(colon + 1));
        if (n < 1 || m < n) throw input_error("--block: need 1 <= n <= m");
        return {n, m};
    } catch (const input_error&) {
        throw;
    } catch (const std::exception&) {
        throw input_error("--block: expected n:m with integer endpoints");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Re-derives the witness embedded in a Strict verdict: every telescope
/// block character must be a regular multiple.
void recheck_certificate(const ActionSpec& spec, const Verdict& v) {
    if (v.outcome != Outcome::Strict || spec.model_tail) return;
    if (!v.telescope) throw inconsistency_error("Strict verdict without a telescope witness");
    const Telescope& t = *v.telescope;
    t.validate();
    auto check_block = [&spec](long long a, long long b) {
        auto bc = block_character(spec, a, b);
        regular_multiple_check(bc.chi, bc.dim);
    };
    for (std::size_t i = 0; i + 1 < t.cuts.size(); ++i) check_block(t.cuts[i], t.cuts[i + 1] - 1);
    if (t.tail_block > 0)
        check_block(t.cuts.back(), t.cuts.back() + t.tail_block - 1);
}

json run_classify(const ActionSpec& spec, const Options& opt, int& exit_code) {
    Verdict v = classify(spec, opt.horizon);
    recheck_certificate(spec, v);
    json result{{"verdict", verdict_json(v)}};
    if (v.outcome == Outcome::TracialOnly && !spec.model_tail) {
        auto cert = rank1_certificate(spec, 1, rational_from_string(opt.epsilon), opt.horizon);
        result["certificate"] = certificate_json(cert);
    }
    exit_code = v.outcome == Outcome::Inconclusive ? 2 : 0;
    return result;
}

json run_analyze(const ActionSpec& spec, const Options& opt, int& exit_code) {
    long long n = 1, m = spec.prefix.size() + std::max<std::size_t>(spec.periodic.size(), 1);
    if (!opt.block.empty()) std::tie(n, m) = parse_block(opt.block);
    auto bc = block_character(spec, n, m);
    auto tv = trace_vector(bc.chi, bc.dim);
    auto T = block_transfer(spec, n, m);
    json eigen = json::array();
    for (const auto& lam : fourier_eigenvalues(T)) eigen.push_back(cyclotomic_json(lam));
    Rational eps = rational_from_string(opt.epsilon);
    json result{{"block", json{{"n", n}, {"m", m}}},
                {"dim", rational_to_string(bc.dim)},
                {"trace_vector", transfer_json(T)["trace_vector"]},
                {"eigenvalues", std::move(eigen)},
                {"simplex_gap", rational_to_string(simplex_gap(T))}};
    auto reg = regular_multiple_check(bc.chi, bc.dim);
    result["regular_multiple"] =
        json{{"is_multiple", reg.is_multiple}, {"copies", rational_to_string(reg.copies)}};
    if (spec.group.kind() == GroupKind::Table) {
        auto split = near_regular_decompose(bc.chi, bc.dim, eps);
        result["near_regular"] = json{{"regular_copies", split.regular_copies},
                                      {"remainder_dim", rational_to_string(split.remainder_dim)},
                                      {"relative_defect", rational_to_string(split.relative_defect)},
                                      {"within_epsilon", split.within_epsilon}};
    } else {
        result["subgroups"] = subgroup_report_json(subgroup_consistency(spec, opt.horizon));
        if (spec.has_tail() && !spec.model_tail)
            result["rank1_certificate"] = certificate_json(rank1_certificate(spec, n, eps, opt.horizon));
    }
    exit_code = 0;
    return result;
}

json run_synth(const ActionSpec& spec, const Options& opt, int& exit_code) {
    long long n = 1, m = 1;
    if (!opt.block.empty()) std::tie(n, m) = parse_block(opt.block);
    SynthMode mode = opt.mode == "tracial" ? SynthMode::Tracial : SynthMode::Strict;
    auto unitaries = materialize_block(spec, n, m);
    auto fam_spec = spectral_projections(unitaries, spec.group);
    auto bc = block_character(spec, n, m);
    auto family = build_rokhlin_family(fam_spec, trace_vector(bc.chi, bc.dim), mode);
    double eps = rational_to_double(rational_from_string(opt.epsilon));
    auto rep = verify_family(family, unitaries, {}, std::max(eps, 1e-9), mode);
    // Structural defects are a bug signal; an epsilon miss (e.g. trace
    // defect above the requested bound) is an honest non-definitive result.
    if (rep.projection_defect > 1e-9 || rep.orthogonality_defect > 1e-9 ||
        rep.equivariance_defect > 1e-9 || (mode == SynthMode::Strict && rep.sum_defect > 1e-9))
        throw inconsistency_error("synthesized family fails its own verification");
    json result{{"block", json{{"n", n}, {"m", m}}},
                {"family", family_json(family, &rep)}};
    exit_code = rep.passed ? 0 : 2;
    return result;
}

RokhlinFamily parse_family(const json& j, const GroupModel& g) {
    RokhlinFamily fam{g, j.at("dim").get<long long>(),
                      j.at("mode").get<std::string>() == "tracial" ? SynthMode::Tracial
                                                                   : SynthMode::Strict,
                      {}, rational_from_string(j.at("trace_defect").get<std::string>())};
    const json& q = j.at("projections");
    if (q.size() != g.order()) throw input_error("family.projections: expected one matrix per group element");
    for (std::size_t k = 0; k < q.size(); ++k)
        fam.q.push_back(parse_matrix(q[k], "family.projections[" + std::to_string(k) + "]"));
    return fam;
}

json run_verify(const ActionSpec& spec, const Options& opt, int& exit_code) {
    if (opt.family_file.empty()) throw input_error("verify: missing family bundle argument");
    json bundle = json::parse(read_file(opt.family_file), nullptr, false);
    if (bundle.is_discarded()) throw input_error(opt.family_file + ": invalid JSON");
    long long n = 1, m = 1;
    if (bundle.contains("block")) {
        n = bundle.at("block").at("n").get<long long>();
        m = bundle.at("block").at("m").get<long long>();
    } else if (!opt.block.empty()) {
        std::tie(n, m) = parse_block(opt.block);
    }
    auto family = parse_family(bundle.contains("family") ? bundle.at("family") : bundle, spec.group);
    auto unitaries = materialize_block(spec, n, m);
    double eps = rational_to_double(rational_from_string(opt.epsilon));
    auto rep = verify_family(family, unitaries, {}, std::max(eps, 1e-9), family.mode);
    json result{{"block", json{{"n", n}, {"m", m}}}, {"verification", verification_json(rep)}};
    exit_code = rep.passed ? 0 : 2;
    return result;
}

json run_crossed(const ActionSpec& spec, const Options& opt, int& exit_code) {
    long long n = 1, m = 2;
    if (!opt.block.empty()) std::tie(n, m) = parse_block(opt.block);
    auto rep = connecting_map_checks(spec, n, m);
    json result{{"block", json{{"n", n}, {"m", m}}},
                {"connecting_map", connecting_report_json(rep)}};
    exit_code = 0;
    return result;
}

int run(const Options& opt) {
    ActionSpec spec = parse_spec_text(read_file(opt.input));
    if (opt.subgroup > 0) spec = restrict_to_divisor(spec, opt.subgroup);

    int exit_code = 0;
    json result;
    if (opt.verb == "classify")
        result = run_classify(spec, opt, exit_code);
    else if (opt.verb == "analyze")
        result = run_analyze(spec, opt, exit_code);
    else if (opt.verb == "synth")
        result = run_synth(spec, opt, exit_code);
    else if (opt.verb == "verify")
        result = run_verify(spec, opt, exit_code);
    else if (opt.verb == "crossed")
        result = run_crossed(spec, opt, exit_code);
    else
        throw input_error("unknown verb: " + opt.verb);

    json report{{"version", kVersion},
                {"digest", report_digest(spec)},
                {"verb", opt.verb},
                {"result", std::move(result)}};
    std::string text = canonical_dump(report);
    if (opt.out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(opt.out);
        if (!out) throw input_error(opt.out + ": cannot write");
        out << text << "\n";
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact classification of product-type group actions on UHF algebras"};
    app.set_version_flag("--version", kVersion);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("spec", opt.input, "ActionSpec JSON file")->required();
        sub->add_option("--horizon", opt.horizon, "Levels to examine (default: auto)");
        sub->add_option("--epsilon", opt.epsilon, "Tolerance as p/q");
        sub->add_option("--block", opt.block, "Level range n:m");
        sub->add_option("--mode", opt.mode, "strict|tracial")
            ->check(CLI::IsMember({"strict", "tracial"}));
        sub->add_option("--out", opt.out, "Report output path (default: stdout)");
        sub->add_option("--subgroup", opt.subgroup, "Restrict to the cyclic subgroup of this index");
        return sub;
    };
    add_common(app.add_subcommand("classify", "Classify the action (Strict/TracialOnly/Neither)"));
    add_common(app.add_subcommand("analyze", "Transfer-matrix and block analysis"));
    add_common(app.add_subcommand("synth", "Synthesize a Rokhlin projection family for a block"));
    auto* verify = add_common(
        app.add_subcommand("verify", "Re-verify a synthesized family bundle against the spec"));
    verify->add_option("family", opt.family_file, "Family bundle JSON file")->required();
    add_common(app.add_subcommand("crossed", "Check crossed-product connecting-map identities"));
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    opt.verb = app.get_subcommands().front()->get_name();

    if (const char* threads = std::getenv("ROKHLIN_THREADS")) {
        int n = std::atoi(threads);
        if (n > 0) Eigen::setNbThreads(n);
    }

    try {
        return run(opt);
    } catch (const rokhlin::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const rokhlin::inconsistency_error& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
