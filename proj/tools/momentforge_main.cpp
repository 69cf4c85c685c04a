#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "momentforge/parallel.hpp"
#include "momentforge/report_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVacuous = 4;

using namespace momentforge;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

Json wrap_with_meta(Json body, Json meta) {
    Json doc;
    doc["report"] = std::move(body);
    doc["meta"] = std::move(meta);
    return doc;
}

int cmd_solve(const ProblemFile& pf, int d, const std::string& format) {
    if (!pf.objective) {
        std::cerr << "solve: problem file has no objective\n";
        return kExitParse;
    }
    LasserreResult res = lasserre_value(*pf.objective, pf.system, d, pf.solver);
    if (res.status == SdpStatus::MaxIter || res.status == SdpStatus::Numerical) {
        std::cerr << "solver failed: " << to_string(res.status) << "\n";
        return kExitSolver;
    }
    if (format == "json") {
        Json j;
        j["d"] = d;
        j["value"] = std::isfinite(res.value) ? Json(res.value)
                                              : Json(res.value > 0 ? "inf" : "-inf");
        j["status"] = to_string(res.status);
        Json moments = Json::array();
        for (size_t i = 0; i < res.y.monomials.size(); ++i) {
            Json m;
            m["monomial"] = momentforge::to_string(res.y.monomials[i], &pf.vars);
            m["exponents"] = res.y.monomials[i].exponents;
            m["value"] = res.y.values.empty() ? 0.0 : res.y.values[i];
            moments.push_back(std::move(m));
        }
        j["moments"] = std::move(moments);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "las_" << d << " = " << res.value << "  [" << to_string(res.status) << "]\n";
        if (!res.y.values.empty()) {
            std::cout << "moments:\n";
            for (size_t i = 0; i < res.y.monomials.size(); ++i)
                std::cout << "  " << momentforge::to_string(res.y.monomials[i], &pf.vars) << " = "
                          << res.y.values[i] << "\n";
        }
    }
    if (res.status == SdpStatus::PrimalInfeasible) return kExitVacuous;
    return kExitOk;
}

int emit_report(const ExactnessReport& rep, const std::string& out_prefix,
                const std::string& format) {
    write_file(out_prefix + ".json", wrap_with_meta(report_to_json(rep), report_meta(rep)).dump(2) + "\n");
    write_file(out_prefix + ".csv", report_csv(rep));
    if (format == "json") {
        std::cout << wrap_with_meta(report_to_json(rep), report_meta(rep)).dump(2) << "\n";
    } else if (format == "csv") {
        std::cout << report_csv(rep);
    } else {
        std::cout << rep.kind << " sweep: " << rep.instance << "\n";
        for (const auto& r : rep.rows)
            std::cout << "  d=" << r.d << "  value=" << r.value << "  oracle=" << r.oracle
                      << "  gap=" << r.gap << "  [" << to_string(r.status) << "]\n";
        if (rep.first_exact_d)
            std::cout << "first exact d = " << *rep.first_exact_d << "\n";
        else
            std::cout << "no exact degree found in range\n";
    }
    std::cout << "wrote " << out_prefix << ".json and " << out_prefix << ".csv\n";
    return rep.vacuous ? kExitVacuous : kExitOk;
}

int cmd_sweep(const ProblemFile& pf, const std::string& out_prefix, const std::string& format) {
    SweepOptions opts;
    opts.even_only = pf.even_only;
    opts.n_dirs = pf.n_dirs;
    ExactnessReport rep;
    if (pf.objective) {
        const int dmin = std::max(pf.d_min, std::max(pf.objective->degree(), 0));
        rep = optimization_sweep(*pf.objective, pf.system, dmin, pf.d_max, pf.tol, pf.solver,
                                 pf.oracle(), opts);
    } else {
        rep = set_exactness_sweep(pf.system, pf.d_max, pf.n_dirs, pf.tol, pf.solver, pf.oracle(),
                                  opts);
    }
    return emit_report(rep, out_prefix, format);
}

int cmd_check(const ProblemFile& pf, const std::string& format) {
    ExactnessReport rep = set_exactness_sweep(pf.system, 2, pf.n_dirs, pf.tol, pf.solver,
                                              pf.oracle());
    Json j = checklist_to_json(rep.hypotheses);
    if (format == "text") {
        std::cout << "archimedean: "
                  << (rep.hypotheses.archimedean.found
                          ? "found N=" + std::to_string(rep.hypotheses.archimedean.n_bound) +
                                " d=" + std::to_string(rep.hypotheses.archimedean.degree)
                          : std::string("Inconclusive"))
                  << "\n";
        std::cout << "quasiconcavity green: " << (rep.hypotheses.quasiconcavity_green ? "yes" : "no")
                  << "\n";
        std::cout << "interior green: " << (rep.hypotheses.interior_green ? "yes" : "no") << "\n";
        std::cout << "atlas points: " << rep.hypotheses.atlas.size() << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return rep.vacuous ? kExitVacuous : kExitOk;
}

int cmd_member(const ProblemFile& pf, const std::string& f_text, int d,
               const std::string& cert_path, const std::string& format) {
    Polynomial f = parse_poly(f_text, pf.vars);
    MembershipResult res = sos_membership(f, pf.system, d, pf.solver);
    if (format == "json") {
        std::cout << membership_to_json(res).dump(2) << "\n";
    } else {
        std::cout << to_string(res.kind) << "  margin=" << res.margin << "  ["
                  << to_string(res.solver_status) << "]\n";
    }
    if (res.certificate) {
        write_file(cert_path, certificate_to_json(*res.certificate).dump(2) + "\n");
        std::cout << "certificate written to " << cert_path << "\n";
    }
    if (res.kind == MembershipKind::Inconclusive &&
        (res.solver_status == SdpStatus::MaxIter || res.solver_status == SdpStatus::Numerical))
        return kExitSolver;
    return kExitOk;
}

int cmd_repro(const std::string& name, const std::string& out_prefix, const std::string& format) {
    if (name == "onedim") {
        const std::vector<std::string> vars = {"x"};
        Polynomial g = parse_poly("x*(1-x)*(x-2)^2", vars);
        PolySystem sys(1, {g});
        OracleConfig cfg;
        cfg.box = {{-1.0, 3.0}};
        cfg.resolution = 201;
        cfg.refine_rounds = 4;
        cfg.feas_tol = 1e-12;
        ExactnessReport rep = set_exactness_sweep(sys, 10, 2, 1e-6, SolverSettings{}, cfg);
        return emit_report(rep, out_prefix, format);
    }
    if (name == "disks") {
        CounterexampleReport rep = counterexample_xy(SolverSettings{});
        Json j = counterexample_to_json(rep);
        write_file(out_prefix + ".json", j.dump(2) + "\n");
        if (format == "json")
            std::cout << j.dump(2) << "\n";
        else {
            std::cout << "hessian state at origin along (1,-1): " << rep.hessian_state_value << "\n";
            std::cout << "oracle min of XY on S(g,h): " << rep.oracle_min << "\n";
            for (const auto& m : rep.memberships)
                std::cout << "  d=" << m.d << "  " << to_string(m.kind) << "  margin=" << m.margin
                          << "\n";
        }
        std::cout << "wrote " << out_prefix << ".json\n";
        return kExitOk;
    }
    std::cerr << "unknown reproduction '" << name << "' (expected onedim or disks)\n";
    return kExitParse;
}

}  // namespace

int main(int argc, char** argv) {
    momentforge::apply_thread_cap_from_env();
    CLI::App app{"moment relaxations of polynomial optimization problems and semialgebraic sets"};
    app.require_subcommand(1);

    std::string problem_path, format = "text", out_prefix = "report";
    std::string member_poly, cert_path = "certificate.json", repro_name;
    int d_flag = -1, dmax_flag = -1, dirs_flag = -1;
    double tol_flag = -1.0, box_flag = -1.0;
    bool odd_flag = false;

    auto add_common = [&](CLI::App* cmd, bool needs_problem) {
        if (needs_problem)
            cmd->add_option("problem", problem_path, "problem file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--format", format, "output format: json, csv or text");
        cmd->add_option("--tol", tol_flag, "exactness tolerance");
        cmd->add_option("--dmax", dmax_flag, "largest relaxation degree");
        cmd->add_option("--dirs", dirs_flag, "number of sweep directions");
        cmd->add_option("--box", box_flag, "oracle box half-width");
        cmd->add_flag("--odd", odd_flag, "include odd relaxation degrees");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve the degree-d moment relaxation");
    add_common(solve_cmd, true);
    solve_cmd->add_option("--d", d_flag, "relaxation degree");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "per-degree exactness sweep with hypothesis checklist");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--out", out_prefix, "output file prefix");

    CLI::App* check_cmd = app.add_subcommand("check", "hypothesis checklist only");
    add_common(check_cmd, true);

    CLI::App* member_cmd = app.add_subcommand("member", "truncated quadratic module membership");
    add_common(member_cmd, true);
    member_cmd->add_option("--f", member_poly, "polynomial to test")->required();
    member_cmd->add_option("--d", d_flag, "truncation degree");
    member_cmd->add_option("--cert", cert_path, "certificate output path");

    CLI::App* repro_cmd = app.add_subcommand("repro", "canned reproductions: onedim, disks");
    repro_cmd->add_option("name", repro_name, "onedim or disks")->required();
    repro_cmd->add_option("--out", out_prefix, "output file prefix");
    repro_cmd->add_option("--format", format, "output format");

    CLI11_PARSE(app, argc, argv);

    try {
        if (repro_cmd->parsed()) return cmd_repro(repro_name, out_prefix, format);

        ProblemFile pf = load_problem_file(problem_path);
        if (tol_flag > 0) pf.tol = tol_flag;
        if (dmax_flag > 0) pf.d_max = dmax_flag;
        if (dirs_flag > 0) pf.n_dirs = dirs_flag;
        if (box_flag > 0) pf.box_half_width = box_flag;
        if (odd_flag) pf.even_only = false;

        if (solve_cmd->parsed()) {
            const int d = d_flag > 0 ? d_flag : pf.d_max;
            return cmd_solve(pf, d, format);
        }
        if (sweep_cmd->parsed()) return cmd_sweep(pf, out_prefix, format);
        if (check_cmd->parsed()) return cmd_check(pf, format);
        if (member_cmd->parsed()) {
            const int d = d_flag > 0 ? d_flag : pf.d_max;
            return cmd_member(pf, member_poly, d, cert_path, format);
        }
    } catch (const momentforge::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}
