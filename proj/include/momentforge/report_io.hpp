#ifndef MOMENTFORGE_REPORT_IO_HPP
#define MOMENTFORGE_REPORT_IO_HPP

#include <json.hpp>

#include "momentforge/probes.hpp"

namespace momentforge {

// Key/value problem description holding polynomial strings; see README for
// the accepted keys. Lines starting with '#' are comments; `constraint`
// may be repeated.
struct ProblemFile {
    std::vector<std::string> vars;
    std::optional<Polynomial> objective;
    PolySystem system;
    double box_half_width = 1.0;  // N > 0, oracle box [-N, N]^n
    int d_min = 2;
    int d_max = 8;
    double tol = 1e-6;
    int n_dirs = 16;
    bool even_only = true;
    int oracle_resolution = 201;
    int oracle_refine_rounds = 4;
    double oracle_feas_tol = 1e-9;
    SolverSettings solver;

    OracleConfig oracle() const;
};

ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem_file(const std::string& path);

using Json = nlohmann::ordered_json;

// Report bodies are deterministic: identical inputs serialize to identical
// bytes. Wall-clock timings travel in a separate meta document.
Json report_to_json(const ExactnessReport& rep);
Json report_meta(const ExactnessReport& rep);
ExactnessReport report_from_json(const Json& j);
std::string report_csv(const ExactnessReport& rep);  // d,value,oracle,gap,status,millis

Json certificate_to_json(const SosCertificate& cert);
SosCertificate certificate_from_json(const Json& j);

Json checklist_to_json(const HypothesisChecklist& hc);
Json counterexample_to_json(const CounterexampleReport& rep);
Json membership_to_json(const MembershipResult& res);

}  // namespace momentforge

#endif
