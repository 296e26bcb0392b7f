#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "rokhlin/action.hpp"
#include "rokhlin/classifier.hpp"
#include "rokhlin/spectral.hpp"
#include "rokhlin/synth.hpp"

namespace rokhlin {

using nlohmann::json;

// ---------------------------------------------------------------- parsing

inline Rational parse_rational(const json& j, const std::string& path) {
    if (!j.is_string() && !j.is_number_integer())
        throw input_error(path + ": expected a \"p/q\" string or integer");
    try {
        if (j.is_number_integer()) return Rational(j.get<long long>());
        return rational_from_string(j.get<std::string>());
    } catch (const std::exception&) {
        throw input_error(path + ": malformed rational");
    }
}

inline Cyclotomic parse_cyclotomic(const json& j, const std::string& path) {
    if (j.is_string() || j.is_number_integer())
        return Cyclotomic(parse_rational(j, path));
    if (!j.is_object() || !j.contains("conductor") || !j.contains("coeffs"))
        throw input_error(path + ": expected {conductor, coeffs}");
    unsigned n = j.at("conductor").get<unsigned>();
    if (n == 0) throw input_error(path + ".conductor: must be positive");
    std::vector<Rational> poly;
    const json& cs = j.at("coeffs");
    if (!cs.is_array()) throw input_error(path + ".coeffs: expected an array");
    if (cs.size() > n) throw input_error(path + ".coeffs: more than `conductor` entries");
    for (std::size_t i = 0; i < cs.size(); ++i)
        poly.push_back(parse_rational(cs[i], path + ".coeffs[" + std::to_string(i) + "]"));
    return Cyclotomic::from_polynomial(n, std::move(poly));
}

inline GroupModel parse_group(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw input_error("group: expected {kind, ...}");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "cyclic") {
        if (!j.contains("n")) throw input_error("group.n: missing");
        return GroupModel::cyclic(j.at("n").get<unsigned>());
    }
    if (kind == "abelian") {
        if (!j.contains("orders") || !j.at("orders").is_array())
            throw input_error("group.orders: expected an array");
        return GroupModel::abelian(j.at("orders").get<std::vector<unsigned>>());
    }
    if (kind == "table") {
        std::vector<unsigned> sizes;
        for (const auto& c : j.at("classes")) sizes.push_back(c.at("size").get<unsigned>());
        unsigned exponent = j.at("exponent").get<unsigned>();
        std::vector<IrreducibleCharacter> irr;
        const json& ji = j.at("irreducibles");
        for (std::size_t i = 0; i < ji.size(); ++i) {
            IrreducibleCharacter chi;
            chi.dim = ji[i].at("dim").get<long long>();
            const json& vals = ji[i].at("values");
            for (std::size_t c = 0; c < vals.size(); ++c)
                chi.values.push_back(parse_cyclotomic(
                    vals[c], "group.irreducibles[" + std::to_string(i) + "].values[" +
                                 std::to_string(c) + "]"));
            irr.push_back(std::move(chi));
        }
        return GroupModel::table(std::move(sizes), exponent, std::move(irr));
    }
    throw input_error("group.kind: unknown kind \"" + kind + "\"");
}

inline ComplexMatrix parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw input_error(path + ": expected a non-empty 2d array");
    long long rows = j.size(), cols = j[0].size();
    ComplexMatrix m(rows, cols);
    for (long long r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array() || static_cast<long long>(row.size()) != cols)
            throw input_error(path + "[" + std::to_string(r) + "]: ragged matrix");
        for (long long c = 0; c < cols; ++c) {
            const json& e = row[c];
            if (!e.is_array() || e.size() != 2)
                throw input_error(path + ": entries must be [re, im] pairs");
            m(r, c) = std::complex<double>(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

inline LevelRep parse_level(const json& j, const GroupModel& g, const std::string& path) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("body"))
        throw input_error(path + ": expected {dim, body}");
    LevelRep level{g, j.at("dim").get<long long>(), MultVector{}};
    const json& body = j.at("body");
    std::string type = body.at("type").get<std::string>();
    if (type == "mults") {
        MultVector mv{body.at("mults").get<std::vector<long long>>()};
        level.body = std::move(mv);
    } else if (type == "char") {
        CharValues cv;
        const json& vals = body.at("values");
        for (std::size_t c = 0; c < vals.size(); ++c)
            cv.values.push_back(parse_cyclotomic(vals[c], path + ".body.values[" + std::to_string(c) + "]"));
        level.body = std::move(cv);
    } else if (type == "model") {
        ModelLevel ml;
        ml.r = body.at("r").get<long long>();
        ml.s = body.at("s").get<long long>();
        if (body.contains("remainder") && !body.at("remainder").is_null()) {
            const json& vals = body.at("remainder");
            for (std::size_t c = 0; c < vals.size(); ++c)
                ml.remainder.push_back(
                    parse_cyclotomic(vals[c], path + ".body.remainder[" + std::to_string(c) + "]"));
        }
        level.body = std::move(ml);
    } else if (type == "matrices") {
        ExplicitMatrices em;
        const json& gens = body.at("generators");
        for (std::size_t i = 0; i < gens.size(); ++i)
            em.generators.push_back(
                parse_matrix(gens[i], path + ".body.generators[" + std::to_string(i) + "]"));
        level.body = std::move(em);
    } else {
        throw input_error(path + ".body.type: unknown type \"" + type + "\"");
    }
    try {
        validate_level(level);
    } catch (const input_error& e) {
        throw input_error(path + ": " + e.what());
    }
    return level;
}

inline ActionSpec parse_spec(const json& j) {
    if (!j.is_object()) throw input_error("spec: expected a JSON object");
    ActionSpec spec;
    spec.group = parse_group(j.value("group", json::object()));
    if (!j.contains("levels") || !j.at("levels").is_array() || j.at("levels").empty())
        throw input_error("levels: expected a non-empty array");
    const json& levels = j.at("levels");
    long long period = 0;
    if (j.contains("tail") && !j.at("tail").is_null()) {
        period = j.at("tail").at("period").get<long long>();
        if (period < 1 || period > static_cast<long long>(levels.size()))
            throw input_error("tail.period: must be in [1, number of levels]");
    }
    long long prefix = static_cast<long long>(levels.size()) - period;
    for (long long i = 0; i < static_cast<long long>(levels.size()); ++i) {
        LevelRep l = parse_level(levels[i], spec.group, "levels[" + std::to_string(i) + "]");
        (i < prefix ? spec.prefix : spec.periodic).push_back(std::move(l));
    }
    validate_spec(spec);
    return spec;
}

inline ActionSpec parse_spec_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw input_error(std::string("spec: invalid JSON: ") + e.what());
    }
    return parse_spec(j);
}

// ------------------------------------------------------------ serializing

inline json rational_json(const Rational& r) { return rational_to_string(r); }

inline json cyclotomic_json(const Cyclotomic& z) {
    json coeffs = json::array();
    for (const auto& c : z.coeffs()) coeffs.push_back(rational_to_string(c));
    return json{{"conductor", z.conductor()}, {"coeffs", std::move(coeffs)}};
}

inline json matrix_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (long long r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (long long c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json group_json(const GroupModel& g) {
    switch (g.kind()) {
        case GroupKind::Cyclic:
            return json{{"kind", "cyclic"}, {"n", g.cyclic_orders()[0]}};
        case GroupKind::Abelian:
            return json{{"kind", "abelian"}, {"orders", g.cyclic_orders()}};
        case GroupKind::Table: {
            json classes = json::array();
            for (unsigned s : g.table_class_sizes()) classes.push_back(json{{"size", s}});
            json irr = json::array();
            for (const auto& chi : g.table_irreducibles()) {
                json vals = json::array();
                for (const auto& v : chi.values) vals.push_back(cyclotomic_json(v));
                irr.push_back(json{{"dim", chi.dim}, {"values", std::move(vals)}});
            }
            return json{{"kind", "table"},
                        {"classes", std::move(classes)},
                        {"exponent", g.exponent()},
                        {"irreducibles", std::move(irr)}};
        }
    }
    throw inconsistency_error("group_json: unreachable kind");
}

inline json level_json(const LevelRep& level) {
    json body;
    if (const auto* mv = std::get_if<MultVector>(&level.body)) {
        body = json{{"type", "mults"}, {"mults", mv->mults}};
    } else if (const auto* cv = std::get_if<CharValues>(&level.body)) {
        json vals = json::array();
        for (const auto& v : cv->values) vals.push_back(cyclotomic_json(v));
        body = json{{"type", "char"}, {"values", std::move(vals)}};
    } else if (const auto* ml = std::get_if<ModelLevel>(&level.body)) {
        body = json{{"type", "model"}, {"r", ml->r}, {"s", ml->s}};
        if (ml->remainder.empty()) {
            body["remainder"] = nullptr;
        } else {
            json vals = json::array();
            for (const auto& v : ml->remainder) vals.push_back(cyclotomic_json(v));
            body["remainder"] = std::move(vals);
        }
    } else if (const auto* em = std::get_if<ExplicitMatrices>(&level.body)) {
        json gens = json::array();
        for (const auto& u : em->generators) gens.push_back(matrix_json(u));
        body = json{{"type", "matrices"}, {"generators", std::move(gens)}};
    }
    return json{{"dim", level.dim}, {"body", std::move(body)}};
}

inline json spec_json(const ActionSpec& spec) {
    json levels = json::array();
    for (const auto& l : spec.prefix) levels.push_back(level_json(l));
    for (const auto& l : spec.periodic) levels.push_back(level_json(l));
    json j{{"group", group_json(spec.group)}, {"levels", std::move(levels)}};
    if (spec.periodic.empty())
        j["tail"] = nullptr;
    else
        j["tail"] = json{{"period", spec.periodic.size()}};
    return j;
}

// ------------------------------------------------------- canonical output

namespace detail {

inline void canonical_append(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann objects iterate sorted
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                canonical_append(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                canonical_append(j[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
            out += buf;
            break;
        }
        default:
            out += j.dump();
    }
}

}  // namespace detail

/// Sorted keys, no insignificant whitespace, floats with 17 significant
/// digits: identical values serialize to identical bytes.
inline std::string canonical_dump(const json& j) {
    std::string out;
    detail::canonical_append(j, out);
    return out;
}

/// FNV-1a 64-bit hash of the canonical serialization of the spec.
inline std::string report_digest(const ActionSpec& spec) {
    std::string text = canonical_dump(spec_json(spec));
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// --------------------------------------------------------- result payloads

inline json telescope_json(const Telescope& t) {
    return json{{"cuts", t.cuts}, {"tail_block", t.tail_block}};
}

inline json verdict_json(const Verdict& v) {
    json classes = json::array();
    for (const auto& c : v.classes)
        classes.push_back(json{{"class", c.cls},
                               {"vanishes_infinitely", c.vanishes_infinitely},
                               {"decays", c.decays},
                               {"period_product", cyclotomic_json(c.period_product)}});
    json j{{"outcome", outcome_name(v.outcome)}, {"classes", std::move(classes)},
           {"horizon", v.horizon}};
    j["telescope"] = v.telescope ? telescope_json(*v.telescope) : json(nullptr);
    j["obstructing_class"] = v.obstructing_class ? json(*v.obstructing_class) : json(nullptr);
    return j;
}

inline json transfer_json(const TransferMatrix& T) {
    json t = json::array();
    for (const auto& x : T.t) t.push_back(rational_to_string(x));
    return json{{"order", T.group.order()}, {"trace_vector", std::move(t)}};
}

inline json certificate_json(const Rank1Certificate& c) {
    return json{{"m", c.m},
                {"gap", rational_to_string(c.gap)},
                {"transfer", transfer_json(c.transfer)}};
}

inline json subgroup_report_json(const SubgroupReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back(json{{"generator", e.generator},
                               {"order", e.subgroup_order},
                               {"outcome", outcome_name(e.outcome)}});
    return json{{"full", outcome_name(rep.full)}, {"subgroups", std::move(entries)}};
}

inline json verification_json(const VerificationReport& rep) {
    return json{{"projection_defect", rep.projection_defect},
                {"orthogonality_defect", rep.orthogonality_defect},
                {"sum_defect", rep.sum_defect},
                {"equivariance_defect", rep.equivariance_defect},
                {"commutator_defect", rep.commutator_defect},
                {"trace_defect", rep.trace_defect},
                {"comparison_ok", rep.comparison_ok},
                {"norm_value", rep.norm_value},
                {"passed", rep.passed}};
}

inline json family_json(const RokhlinFamily& fam, const VerificationReport* rep = nullptr) {
    json q = json::array();
    for (const auto& m : fam.q) q.push_back(matrix_json(m));
    json j{{"dim", fam.dim},
           {"mode", fam.mode == SynthMode::Strict ? "strict" : "tracial"},
           {"projections", std::move(q)},
           {"trace_defect", rational_to_string(fam.trace_defect)}};
    if (rep) j["verification"] = verification_json(*rep);
    return j;
}

inline json connecting_report_json(const ConnectingMapReport& rep) {
    json traces = json::array();
    for (const auto& t : rep.summand_traces) traces.push_back(rational_to_string(t));
    return json{{"tensor_identity_defect", rep.tensor_identity_defect},
                {"unitary_transport_defect", rep.unitary_transport_defect},
                {"summand_image_defect", rep.summand_image_defect},
                {"summand_traces", std::move(traces)},
                {"passed", rep.pass()}};
}

}  // namespace rokhlin
