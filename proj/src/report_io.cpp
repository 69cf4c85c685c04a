#include "momentforge/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace momentforge {

namespace {

// Infinities are legal report values (empty or unbounded relaxations) but
// JSON numbers cannot carry them; encode as strings.
Json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double num_from(const Json& j) {
    if (j.is_number()) return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

SdpStatus status_from(const std::string& s) {
    if (s == "Optimal") return SdpStatus::Optimal;
    if (s == "PrimalInfeasible") return SdpStatus::PrimalInfeasible;
    if (s == "DualInfeasible") return SdpStatus::DualInfeasible;
    if (s == "MaxIter") return SdpStatus::MaxIter;
    return SdpStatus::Numerical;
}

Json row_to_json(const SweepRow& r) {
    Json j;
    j["d"] = r.d;
    j["value"] = num(r.value);
    j["oracle"] = num(r.oracle);
    j["gap"] = num(r.gap);
    j["status"] = to_string(r.status);
    return j;
}

SweepRow row_from_json(const Json& j) {
    SweepRow r;
    r.d = j.at("d").get<int>();
    r.value = num_from(j.at("value"));
    r.oracle = num_from(j.at("oracle"));
    r.gap = num_from(j.at("gap"));
    r.status = status_from(j.at("status").get<std::string>());
    return r;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

OracleConfig ProblemFile::oracle() const {
    OracleConfig cfg = OracleConfig::cube(static_cast<int>(vars.size()), box_half_width);
    cfg.resolution = oracle_resolution;
    cfg.refine_rounds = oracle_refine_rounds;
    cfg.feas_tol = oracle_feas_tol;
    return cfg;
}

ProblemFile parse_problem_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<std::string, std::string>> kvs;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("problem file: expected key = value on line " +
                                        std::to_string(lineno));
        kvs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    ProblemFile pf;
    for (const auto& [k, v] : kvs) {
        if (k == "vars") {
            std::string token;
            for (char c : v) {
                if (c == ',' || c == ' ' || c == '\t') {
                    if (!token.empty()) pf.vars.push_back(token);
                    token.clear();
                } else {
                    token += c;
                }
            }
            if (!token.empty()) pf.vars.push_back(token);
        }
    }
    if (pf.vars.empty()) throw std::invalid_argument("problem file: missing 'vars'");
    const int n = static_cast<int>(pf.vars.size());

    std::vector<Polynomial> constraints;
    for (const auto& [k, v] : kvs) {
        if (k == "vars") continue;
        if (k == "objective") pf.objective = parse_poly(v, pf.vars);
        else if (k == "constraint") constraints.push_back(parse_poly(v, pf.vars));
        else if (k == "box") pf.box_half_width = std::stod(v);
        else if (k == "dmin") pf.d_min = std::stoi(v);
        else if (k == "dmax") pf.d_max = std::stoi(v);
        else if (k == "tol") pf.tol = std::stod(v);
        else if (k == "dirs") pf.n_dirs = std::stoi(v);
        else if (k == "odd") pf.even_only = !(v == "true" || v == "1");
        else if (k == "resolution") pf.oracle_resolution = std::stoi(v);
        else if (k == "refine_rounds") pf.oracle_refine_rounds = std::stoi(v);
        else if (k == "feas_tol") pf.oracle_feas_tol = std::stod(v);
        else if (k == "gap_tol") pf.solver.gap_tol = std::stod(v);
        else if (k == "solver_feas_tol") pf.solver.feas_tol = std::stod(v);
        else if (k == "max_iter") pf.solver.max_iter = std::stoi(v);
        else if (k == "step_frac") pf.solver.step_frac = std::stod(v);
        else throw std::invalid_argument("problem file: unknown key '" + k + "'");
    }
    if (!(pf.box_half_width > 0)) throw std::invalid_argument("problem file: box must be positive");
    pf.system = PolySystem(n, std::move(constraints));
    return pf;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open problem file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_problem_text(buf.str());
}

Json report_to_json(const ExactnessReport& rep) {
    Json j;
    j["kind"] = rep.kind;
    j["instance"] = rep.instance;
    j["tol"] = rep.tol;
    j["vacuous"] = rep.vacuous;
    j["rows"] = Json::array();
    for (const auto& r : rep.rows) j["rows"].push_back(row_to_json(r));
    if (rep.kind == "set") {
        j["directions"] = rep.directions;
        j["per_direction"] = Json::array();
        for (const auto& rows : rep.per_direction) {
            Json a = Json::array();
            for (const auto& r : rows) a.push_back(row_to_json(r));
            j["per_direction"].push_back(std::move(a));
        }
    }
    if (rep.first_exact_d)
        j["first_exact_d"] = *rep.first_exact_d;
    else
        j["first_exact_d"] = nullptr;
    j["hypotheses"] = checklist_to_json(rep.hypotheses);
    return j;
}

Json report_meta(const ExactnessReport& rep) {
    Json meta;
    Json row_ms = Json::array();
    for (const auto& r : rep.rows) row_ms.push_back(r.millis);
    meta["row_millis"] = std::move(row_ms);
    if (rep.kind == "set") {
        Json pd = Json::array();
        for (const auto& rows : rep.per_direction) {
            Json a = Json::array();
            for (const auto& r : rows) a.push_back(r.millis);
            pd.push_back(std::move(a));
        }
        meta["per_direction_millis"] = std::move(pd);
    }
    return meta;
}

ExactnessReport report_from_json(const Json& j) {
    ExactnessReport rep;
    rep.kind = j.at("kind").get<std::string>();
    rep.instance = j.at("instance").get<std::string>();
    rep.tol = j.at("tol").get<double>();
    rep.vacuous = j.at("vacuous").get<bool>();
    for (const auto& r : j.at("rows")) rep.rows.push_back(row_from_json(r));
    if (rep.kind == "set") {
        rep.directions = j.at("directions").get<std::vector<std::vector<double>>>();
        for (const auto& a : j.at("per_direction")) {
            std::vector<SweepRow> rows;
            for (const auto& r : a) rows.push_back(row_from_json(r));
            rep.per_direction.push_back(std::move(rows));
        }
    }
    if (!j.at("first_exact_d").is_null()) rep.first_exact_d = j.at("first_exact_d").get<int>();
    // The checklist is parsed only as far as the round-trip needs.
    const Json& h = j.at("hypotheses");
    rep.hypotheses.archimedean.found = h.at("archimedean").at("found").get<bool>();
    rep.hypotheses.archimedean.n_bound = h.at("archimedean").at("N").get<int>();
    rep.hypotheses.archimedean.degree = h.at("archimedean").at("d").get<int>();
    rep.hypotheses.archimedean.n_max_tried = h.at("archimedean").at("n_max").get<int>();
    rep.hypotheses.archimedean.d_max_tried = h.at("archimedean").at("d_max").get<int>();
    rep.hypotheses.quasiconcavity_green = h.at("quasiconcavity_green").get<bool>();
    rep.hypotheses.interior_green = h.at("interior_green").get<bool>();
    for (const auto& a : h.at("atlas")) {
        AtlasCheck ac;
        ac.entry.point = a.at("point").get<std::vector<double>>();
        ac.entry.active = a.at("active").get<std::vector<int>>();
        ac.entry.direction = a.at("direction").get<std::vector<double>>();
        ac.entry.box_active = a.at("box_active").get<bool>();
        ac.interior_near = a.at("interior_near").get<bool>();
        for (const auto& vj : a.at("verdicts")) {
            QuasiconcavityVerdict v;
            v.point = ac.entry.point;
            v.gradient_norm = num_from(vj.at("gradient_norm"));
            v.tangent_max_eig = num_from(vj.at("tangent_max_eig"));
            const std::string verdict = vj.at("verdict").get<std::string>();
            v.verdict = verdict == "StrictlyConcave" ? Concavity::StrictlyConcave
                        : verdict == "StrictlyQuasiconcave" ? Concavity::StrictlyQuasiconcave
                                                            : Concavity::Fails;
            if (!vj.at("lift_lambda").is_null()) v.lift_lambda = vj.at("lift_lambda").get<double>();
            ac.verdicts.push_back(std::move(v));
        }
        rep.hypotheses.atlas.push_back(std::move(ac));
    }
    rep.hypotheses.minimizers = h.at("minimizers").get<std::vector<std::vector<double>>>();
    rep.hypotheses.minimizer_hessian_pd = h.at("minimizer_hessian_pd").get<std::vector<bool>>();
    rep.hypotheses.minimizer_infeasibility_dist =
        h.at("minimizer_infeasibility_dist").get<std::vector<double>>();
    rep.hypotheses.epsilon_u_valid = !h.at("epsilon_u").is_null();
    if (rep.hypotheses.epsilon_u_valid) rep.hypotheses.epsilon_u = num_from(h.at("epsilon_u"));
    return rep;
}

std::string report_csv(const ExactnessReport& rep) {
    std::ostringstream os;
    os << "d,value,oracle,gap,status,millis\n";
    char buf[128];
    auto emit = [&](const SweepRow& r) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%s,%.3f\n", r.d, r.value, r.oracle,
                      r.gap, to_string(r.status).c_str(), r.millis);
        os << buf;
    };
    if (rep.kind == "set") {
        for (const auto& rows : rep.per_direction)
            for (const auto& r : rows) emit(r);
    } else {
        for (const auto& r : rep.rows) emit(r);
    }
    return os.str();
}

Json certificate_to_json(const SosCertificate& cert) {
    Json j;
    j["n"] = cert.n;
    j["degree"] = cert.degree;
    j["blocks"] = Json::array();
    for (const auto& b : cert.blocks) {
        Json bj;
        bj["constraint"] = b.constraint_index;
        Json basis = Json::array();
        for (const auto& m : b.basis) basis.push_back(m.exponents);
        bj["basis"] = std::move(basis);
        Json gram = Json::array();
        for (int r = 0; r < b.gram.dim(); ++r) {
            Json row = Json::array();
            for (int c = 0; c < b.gram.dim(); ++c) row.push_back(b.gram.at(r, c));
            gram.push_back(std::move(row));
        }
        bj["gram"] = std::move(gram);
        j["blocks"].push_back(std::move(bj));
    }
    j["residual"] = num(cert.residual);
    j["min_eigenvalues"] = Json::array();
    for (double v : cert.min_eigenvalues) j["min_eigenvalues"].push_back(num(v));
    return j;
}

SosCertificate certificate_from_json(const Json& j) {
    SosCertificate cert;
    cert.n = j.at("n").get<int>();
    cert.degree = j.at("degree").get<int>();
    for (const auto& bj : j.at("blocks")) {
        SosCertificate::GramBlock b;
        b.constraint_index = bj.at("constraint").get<int>();
        for (const auto& e : bj.at("basis")) b.basis.emplace_back(e.get<std::vector<int>>());
        const auto& gram = bj.at("gram");
        const int dim = static_cast<int>(gram.size());
        b.gram = SymMatrix(dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c <= r; ++c) b.gram.at(r, c) = gram.at(r).at(c).get<double>();
        cert.blocks.push_back(std::move(b));
    }
    cert.residual = num_from(j.at("residual"));
    for (const auto& v : j.at("min_eigenvalues")) cert.min_eigenvalues.push_back(num_from(v));
    return cert;
}

Json checklist_to_json(const HypothesisChecklist& hc) {
    Json j;
    Json arch;
    arch["found"] = hc.archimedean.found;
    arch["N"] = hc.archimedean.n_bound;
    arch["d"] = hc.archimedean.degree;
    arch["n_max"] = hc.archimedean.n_max_tried;
    arch["d_max"] = hc.archimedean.d_max_tried;
    j["archimedean"] = std::move(arch);
    j["quasiconcavity_green"] = hc.quasiconcavity_green;
    j["interior_green"] = hc.interior_green;
    j["atlas"] = Json::array();
    for (const auto& ac : hc.atlas) {
        Json a;
        a["point"] = ac.entry.point;
        a["active"] = ac.entry.active;
        a["direction"] = ac.entry.direction;
        a["box_active"] = ac.entry.box_active;
        a["interior_near"] = ac.interior_near;
        Json verdicts = Json::array();
        for (size_t vi = 0; vi < ac.verdicts.size(); ++vi) {
            const auto& v = ac.verdicts[vi];
            Json vj;
            vj["constraint"] = vi < ac.entry.active.size() ? ac.entry.active[vi] : -1;
            vj["verdict"] = to_string(v.verdict);
            vj["gradient_norm"] = num(v.gradient_norm);
            vj["tangent_max_eig"] = num(v.tangent_max_eig);
            if (v.lift_lambda)
                vj["lift_lambda"] = *v.lift_lambda;
            else
                vj["lift_lambda"] = nullptr;
            verdicts.push_back(std::move(vj));
        }
        a["verdicts"] = std::move(verdicts);
        j["atlas"].push_back(std::move(a));
    }
    j["minimizers"] = hc.minimizers;
    j["minimizer_hessian_pd"] = hc.minimizer_hessian_pd;
    j["minimizer_infeasibility_dist"] = hc.minimizer_infeasibility_dist;
    if (hc.epsilon_u_valid)
        j["epsilon_u"] = num(hc.epsilon_u);
    else
        j["epsilon_u"] = nullptr;
    return j;
}

Json counterexample_to_json(const CounterexampleReport& rep) {
    Json j;
    j["instance"] = "XY over the two unit disks centered (1,0) and (0,1)";
    j["hessian_state"] = rep.hessian_state_value;
    j["double_zero_at_origin"] = rep.double_zero;
    j["oracle_min"] = num(rep.oracle_min);
    j["oracle_minimizer"] = rep.oracle_minimizer;
    j["memberships"] = Json::array();
    for (const auto& m : rep.memberships) {
        Json mj;
        mj["d"] = m.d;
        mj["verdict"] = to_string(m.kind);
        mj["margin"] = num(m.margin);
        j["memberships"].push_back(std::move(mj));
    }
    return j;
}

Json membership_to_json(const MembershipResult& res) {
    Json j;
    j["verdict"] = to_string(res.kind);
    j["margin"] = num(res.margin);
    j["solver_status"] = to_string(res.solver_status);
    if (res.certificate)
        j["certificate"] = certificate_to_json(*res.certificate);
    else
        j["certificate"] = nullptr;
    return j;
}

}  // namespace momentforge
