// Command-line front end: collective rates, channel evolution, teleportation
// fidelity, figure-style sweeps and the decay-time threshold report, all as
// reproducible runs with deterministic CSV output.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "telatom/analysis.hpp"

namespace {

using namespace telatom;

// 12 significant digits, scientific; fixed formatting keeps reruns
// byte-identical.
std::string fmt(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

struct Output {
    std::string path;  // empty = stdout
    std::string body;

    void line(const std::string& s) { body += s + "\n"; }
    void config(const std::string& key, const std::string& value) {
        body += "# " + key + " = " + value + "\n";
    }
    int flush() const {
        if (path.empty()) {
            std::cout << body;
            return 0;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot open output file " << path << "\n";
            return 1;
        }
        f << body;
        return 0;
    }
};

const std::map<std::string, NamedInitial> kInitialNames = {
    {"bell0", NamedInitial::Bell0},       {"bell1", NamedInitial::Bell1},
    {"bell2", NamedInitial::Bell2},       {"bell3", NamedInitial::Bell3},
    {"product-eg", NamedInitial::ProductEG},
};

const std::map<std::string, Engine> kEngineNames = {
    {"analytic", Engine::Analytic},
    {"integrator", Engine::Integrator},
    {"both", Engine::Both},
    {"auto", Engine::Auto},
};

struct CommonOpts {
    std::string initial = "bell1";
    double r = 0.6737;
    double gamma = 1.0;
    double omega0 = 100.0;
    double dipole_angle = 0.5 * std::numbers::pi;
    std::string engine = "auto";
    double dt = 0.0;
    double tol = 1e-8;
    double check_tol = 1e-6;
    std::string out_path;
};

void add_geometry_flags(CLI::App* cmd, CommonOpts& o, bool with_initial = true) {
    if (with_initial)
        cmd->add_option("--initial", o.initial, "initial channel state")
            ->check(CLI::IsMember(kInitialNames, CLI::ignore_case))
            ->capture_default_str();
    cmd->add_option("--gamma", o.gamma, "spontaneous emission rate")->capture_default_str();
    cmd->add_option("--omega0", o.omega0, "transition frequency (units of gamma)")
        ->capture_default_str();
    cmd->add_option("--dipole-angle", o.dipole_angle, "angle between mu and r12 (radians)")
        ->capture_default_str();
}

void add_engine_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--engine", o.engine, "evolution engine")
        ->check(CLI::IsMember(kEngineNames, CLI::ignore_case))
        ->capture_default_str();
    cmd->add_option("--dt", o.dt, "fixed integrator step (0 = automatic)")
        ->capture_default_str();
    cmd->add_option("--tol", o.tol, "integrator local error target per unit time")
        ->capture_default_str();
    cmd->add_option("--check-tol", o.check_tol,
                    "max |analytic - integrator| accepted by --engine both")
        ->capture_default_str();
}

void echo_common(Output& out, const CommonOpts& o, bool with_initial, bool with_engine) {
    if (with_initial) out.config("initial", o.initial);
    out.config("gamma", fmt(o.gamma));
    out.config("omega0", fmt(o.omega0));
    out.config("dipole_angle", fmt(o.dipole_angle));
    if (with_engine) {
        out.config("engine", o.engine);
        out.config("dt", fmt(o.dt));
        out.config("tol", fmt(o.tol));
        out.config("check_tol", fmt(o.check_tol));
    }
}

GeometryParams geometry(const CommonOpts& o) {
    return GeometryParams{o.r, o.dipole_angle, o.gamma, o.omega0};
}

std::string strategy_str(const RecoveryStrategy& s) {
    return "(" + std::to_string(s.m[0]) + "," + std::to_string(s.m[1]) + "," +
           std::to_string(s.m[2]) + "," + std::to_string(s.m[3]) + ")";
}

void write_sweep_csv(Output& out, const std::vector<SweepRow>& rows, bool surface) {
    if (surface) {
        out.line("gt,r_over_lambda,F");
        for (const SweepRow& row : rows)
            out.line(fmt(row.coord) + "," + fmt(row.coord2) + "," + fmt(row.F));
    } else {
        out.line("coord,F,C,P");
        for (const SweepRow& row : rows)
            out.line(fmt(row.coord) + "," + fmt(row.F) + "," + fmt(row.C) + "," + fmt(row.P));
    }
}

void write_root(Output& out, const std::string& name, const RootInfo& info) {
    out.line(name + " = " + fmt(info.value));
    out.config(name + ".bracket", "[" + fmt(info.bracket_lo) + ", " + fmt(info.bracket_hi) + "]");
    out.config(name + ".tolerance", fmt(info.tolerance));
    out.config(name + ".iterations", std::to_string(info.iterations));
    out.config(name + ".definition", info.definition);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-atom collective-decay teleportation channel"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file (flags win on conflict)");

    CommonOpts o;
    double gt = 0.0, gt_min = 0.0, gt_max = 1.0;
    double r_min = 0.05, r_max = 3.0;
    int samples = 1000, gt_samples = 101, r_samples = 101;

    auto* rates_cmd = app.add_subcommand("rates", "collective damping and dipole shift");
    rates_cmd->add_option("--r", o.r, "separation r12/lambda")->required();
    add_geometry_flags(rates_cmd, o, /*with_initial=*/false);
    rates_cmd->add_option("-o,--output", o.out_path, "write to file instead of stdout");

    auto* evolve_cmd = app.add_subcommand("evolve", "time series of the channel state entries");
    evolve_cmd->add_option("--r", o.r, "separation r12/lambda")->required();
    evolve_cmd->add_option("--gt-min", gt_min, "first rescaled time")->capture_default_str();
    evolve_cmd->add_option("--gt-max", gt_max, "last rescaled time")->required();
    evolve_cmd->add_option("--samples", samples, "number of samples")->capture_default_str();
    add_geometry_flags(evolve_cmd, o);
    add_engine_flags(evolve_cmd, o);
    evolve_cmd->add_option("-o,--output", o.out_path, "write to file instead of stdout");

    auto* fid_cmd = app.add_subcommand("fidelity",
                                       "fidelity, concurrence, purity and optimal recovery");
    fid_cmd->add_option("--r", o.r, "separation r12/lambda")->required();
    fid_cmd->add_option("--gt", gt, "rescaled time gamma t")->required();
    add_geometry_flags(fid_cmd, o);
    add_engine_flags(fid_cmd, o);
    fid_cmd->add_option("-o,--output", o.out_path, "write to file instead of stdout");

    auto* st_cmd = app.add_subcommand("sweep-time", "F, C, P versus rescaled time");
    st_cmd->add_option("--r", o.r, "separation r12/lambda")->required();
    st_cmd->add_option("--gt-min", gt_min, "first rescaled time")->capture_default_str();
    st_cmd->add_option("--gt-max", gt_max, "last rescaled time")->required();
    st_cmd->add_option("--samples", samples, "number of samples")->capture_default_str();
    add_geometry_flags(st_cmd, o);
    add_engine_flags(st_cmd, o);
    st_cmd->add_option("-o,--output", o.out_path, "write to file instead of stdout");

    auto* sd_cmd = app.add_subcommand("sweep-distance", "F, C, P versus separation");
    sd_cmd->add_option("--gt", gt, "rescaled time gamma t")->required();
    sd_cmd->add_option("--r-min", r_min, "smallest separation")->capture_default_str();
    sd_cmd->add_option("--r-max", r_max, "largest separation")->capture_default_str();
    sd_cmd->add_option("--samples", samples, "number of samples")->capture_default_str();
    add_geometry_flags(sd_cmd, o);
    add_engine_flags(sd_cmd, o);
    sd_cmd->add_option("-o,--output", o.out_path, "write to file instead of stdout");

    auto* surf_cmd = app.add_subcommand("surface", "F on a (gt, r) grid");
    surf_cmd->add_option("--gt-min", gt_min, "first rescaled time")->capture_default_str();
    surf_cmd->add_option("--gt-max", gt_max, "last rescaled time")->required();
    surf_cmd->add_option("--r-min", r_min, "smallest separation")->capture_default_str();
    surf_cmd->add_option("--r-max", r_max, "largest separation")->capture_default_str();
    surf_cmd->add_option("--gt-samples", gt_samples, "grid size in gt")->capture_default_str();
    surf_cmd->add_option("--r-samples", r_samples, "grid size in r")->capture_default_str();
    add_geometry_flags(surf_cmd, o);
    add_engine_flags(surf_cmd, o);
    surf_cmd->add_option("-o,--output", o.out_path, "write to file instead of stdout");

    auto* th_cmd = app.add_subcommand("thresholds", "critical decay-time report");
    th_cmd->add_option("-o,--output", o.out_path, "write to file instead of stdout");

    for (CLI::App* sub : app.get_subcommands(nullptr)) {
        sub->configurable();
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        Output out;
        out.path = o.out_path;
        const Engine engine = kEngineNames.at(o.engine);
        const StepControl sc{o.dt, o.tol};

        if (rates_cmd->parsed()) {
            out.line("# telatom rates");
            out.config("r_over_lambda", fmt(o.r));
            echo_common(out, o, false, false);
            const CouplingRates rates = coupling_pair(geometry(o));
            out.line("gamma12 = " + fmt(rates.gamma12));
            out.line("omega12 = " + fmt(rates.omega12));
        } else if (evolve_cmd->parsed()) {
            out.line("# telatom evolve");
            out.config("r_over_lambda", fmt(o.r));
            out.config("gt_min", fmt(gt_min));
            out.config("gt_max", fmt(gt_max));
            out.config("samples", std::to_string(samples));
            echo_common(out, o, true, true);
            const GeometryParams geom = geometry(o);
            geom.validate();
            const CouplingRates rates = coupling_pair(geom);
            const XState x0 = initial_density(kInitialNames.at(o.initial));
            Range range{gt_min, gt_max, samples};
            range.validate("evolve time range");
            out.line("gt,rho11,rho22,rho33,rho44,re_rho14,im_rho14,re_rho23,im_rho23");
            for (int i = 0; i < range.count; ++i) {
                const double t = range.at(i) / o.gamma;
                const XState x = evolve_channel(x0, rates, o.gamma, o.omega0, t, engine, sc,
                                                o.check_tol);
                out.line(fmt(range.at(i)) + "," + fmt(x.p11) + "," + fmt(x.p22) + "," +
                         fmt(x.p33) + "," + fmt(x.p44) + "," + fmt(x.c14.real()) + "," +
                         fmt(x.c14.imag()) + "," + fmt(x.c23.real()) + "," + fmt(x.c23.imag()));
            }
        } else if (fid_cmd->parsed()) {
            out.line("# telatom fidelity");
            out.config("r_over_lambda", fmt(o.r));
            out.config("gt", fmt(gt));
            echo_common(out, o, true, true);
            const ChannelPoint pt = channel_point(kInitialNames.at(o.initial), geometry(o),
                                                  gt / o.gamma, engine, sc, o.check_tol);
            out.line("F = " + fmt(pt.F));
            out.line("C = " + fmt(pt.C));
            out.line("P = " + fmt(pt.P));
            out.line("strategy = " + strategy_str(pt.strategy));
        } else if (st_cmd->parsed() || sd_cmd->parsed() || surf_cmd->parsed()) {
            SweepSpec spec;
            spec.initial = kInitialNames.at(o.initial);
            spec.gamma = o.gamma;
            spec.omega0 = o.omega0;
            spec.dipole_angle = o.dipole_angle;
            spec.engine = engine;
            spec.step = sc;
            spec.cross_check_tol = o.check_tol;
            if (st_cmd->parsed()) {
                out.line("# telatom sweep-time");
                out.config("r_over_lambda", fmt(o.r));
                out.config("gt_min", fmt(gt_min));
                out.config("gt_max", fmt(gt_max));
                out.config("samples", std::to_string(samples));
                spec.axis = SweepAxis::Time;
                spec.primary = {gt_min, gt_max, samples};
                spec.fixed = o.r;
            } else if (sd_cmd->parsed()) {
                out.line("# telatom sweep-distance");
                out.config("gt", fmt(gt));
                out.config("r_min", fmt(r_min));
                out.config("r_max", fmt(r_max));
                out.config("samples", std::to_string(samples));
                spec.axis = SweepAxis::Distance;
                spec.primary = {r_min, r_max, samples};
                spec.fixed = gt;
            } else {
                out.line("# telatom surface");
                out.config("gt_min", fmt(gt_min));
                out.config("gt_max", fmt(gt_max));
                out.config("r_min", fmt(r_min));
                out.config("r_max", fmt(r_max));
                out.config("gt_samples", std::to_string(gt_samples));
                out.config("r_samples", std::to_string(r_samples));
                spec.axis = SweepAxis::Surface;
                spec.primary = {gt_min, gt_max, gt_samples};
                spec.secondary = {r_min, r_max, r_samples};
            }
            echo_common(out, o, true, true);
            write_sweep_csv(out, sweep(spec), surf_cmd->parsed());
        } else if (th_cmd->parsed()) {
            out.line("# telatom thresholds");
            const ThresholdReport rep = decay_time_thresholds();
            write_root(out, "psi1_infinite_tail", rep.psi1_infinite_tail);
            write_root(out, "psi1_extinction", rep.psi1_extinction);
            write_root(out, "psi2_all_distances", rep.psi2_all_distances);
        }
        return out.flush();
    } catch (const cross_check_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
