#include "dvpp/cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "dvpp/config.hpp"
#include "dvpp/engine.hpp"
#include "dvpp/errors.hpp"
#include "dvpp/metrics.hpp"
#include "dvpp/plots.hpp"
#include "dvpp/presets.hpp"
#include "dvpp/trace_io.hpp"

namespace dvpp {

namespace {

struct SourceArgs {
    std::string preset_name;
    std::string config_path;
};

void add_source(CLI::App* cmd, SourceArgs& src) {
    auto* p = cmd->add_option("--preset", src.preset_name, "built-in scenario (s1, s2, s2-no-support)");
    auto* c = cmd->add_option("--config", src.config_path, "scenario file (JSON)");
    p->excludes(c);
}

ScenarioSpec resolve(const SourceArgs& src) {
    if (!src.config_path.empty()) return load_scenario(src.config_path);
    if (!src.preset_name.empty()) return preset(src.preset_name);
    throw ValidationError({"either --preset or --config is required"});
}

ScenarioSpec resolve_named(const std::string& name_or_path) {
    for (const auto& n : preset_names())
        if (n == name_or_path) return preset(n);
    return load_scenario(name_or_path);
}

MetricsOptions metrics_options(const ScenarioSpec& spec) {
    MetricsOptions m;
    m.window_start = spec.output.metrics_window_start;
    m.window_end = spec.output.metrics_window_end;
    m.inertia_weighted = spec.output.inertia_weighted_mean;
    return m;
}

void print_certification(std::ostream& out, const std::vector<NodeCertification>& certs) {
    for (const auto& c : certs) {
        out << "node " << c.node << "  H=" << c.inertia << "  eig=[";
        for (std::size_t k = 0; k < c.eigen.eigenvalues.size(); ++k) {
            const auto& ev = c.eigen.eigenvalues[k];
            out << (k ? ", " : "") << ev.real() << (ev.imag() >= 0 ? "+" : "") << ev.imag() << "j";
        }
        out << "]  margin=" << c.eigen.margin << "  lyapunov="
            << (c.lyapunov.certified ? "P>0" : (c.lyapunov.solvable ? "P indefinite" : "singular"))
            << "  -> " << (c.eigen.certified ? "CERTIFIED" : "NOT CERTIFIED") << "\n";
    }
}

void print_summary(std::ostream& out, const Metrics& m) {
    out << "final state:\n";
    out << "  node        omega        P_hat          u_m      u_delta          tie   settle[s]\n";
    for (const auto& n : m.nodes) {
        out << "  " << std::setw(4) << n.node << std::scientific << std::setprecision(4) << std::setw(13) << n.omega
            << std::setw(13) << n.p_unmeas_hat << std::setw(13) << n.u_m << std::setw(13) << n.u_delta
            << std::setw(13) << n.tie << std::defaultfloat << std::setw(12) << n.settling_time << "\n";
    }
    out << "RMS RoCoF of mean frequency over [" << m.window_start << ", " << m.window_end
        << "] s: " << m.rms_mean_rocof << "\n";
}

int cmd_run(const SourceArgs& src, const std::string& out_dir_arg, const std::string& format,
            std::optional<std::uint64_t> seed, std::optional<double> dt, std::optional<std::size_t> decimate,
            bool plots, const std::string& baseline, bool weighted, std::ostream& out, std::ostream& err) {
    ScenarioSpec spec = resolve(src);
    if (seed) spec.master_seed = *seed;
    if (dt) spec.dt = *dt;
    if (decimate) spec.output.decimation = *decimate;
    if (weighted) spec.output.inertia_weighted_mean = true;
    spec.validate();

    std::string out_dir = out_dir_arg;
    if (out_dir.empty()) {
        const char* env = std::getenv(kOutputDirEnv);
        out_dir = env && *env ? env : "dvppsim-out";
    }

    Simulator sim(spec);
    if (!sim.all_certified()) {
        err << "warning: estimator gain not certified for every node, continuing as configured\n";
        print_certification(err, sim.certification());
    }
    while (!sim.done()) sim.step();
    SimulationTrace trace = sim.take_trace();
    trace.header().config_hash = config_hash(spec);

    const auto metrics = derived_metrics(trace, metrics_options(spec));
    auto summary = metrics_to_json(metrics);
    summary["scenario"] = spec.name;
    summary["trace_digest"] = trace_digest(trace);

    if (!baseline.empty()) {
        ScenarioSpec base = resolve_named(baseline);
        base.master_seed = spec.master_seed;
        if (dt) base.dt = *dt;
        auto base_trace = run(base);
        const auto base_metrics = derived_metrics(base_trace, metrics_options(spec));
        const double ratio = metrics.rms_mean_rocof / base_metrics.rms_mean_rocof;
        summary["baseline"] = {{"scenario", base.name},
                               {"rms_rocof_mean_frequency", base_metrics.rms_mean_rocof},
                               {"rms_rocof_ratio", ratio}};
        out << "baseline " << base.name << ": RMS RoCoF " << base_metrics.rms_mean_rocof << ", ratio " << ratio << "\n";
    }

    const std::filesystem::path dir(out_dir);
    const auto stored = spec.output.decimation > 1 ? trace.decimated(spec.output.decimation) : trace;
    const auto file = write_trace(stored, spec, dir, format == "binary" ? TraceFormat::Binary : TraceFormat::Csv);
    write_text_file(dir / "metrics.json", summary.dump(2) + "\n");
    if (plots) write_figure_panels(trace, metrics, dir / "plots");

    out << "scenario " << spec.name << ": " << trace.rows() << " steps recorded, trace " << file.string() << "\n";
    out << "trace digest " << summary["trace_digest"].get<std::string>() << "\n";
    print_summary(out, metrics);
    return kExitOk;
}

int cmd_certify(const SourceArgs& src, std::ostream& out) {
    const ScenarioSpec spec = resolve(src);
    const auto certs = certify_scenario(spec);
    print_certification(out, certs);
    const bool ok = std::all_of(certs.begin(), certs.end(), [](const auto& c) { return c.eigen.certified; });
    out << (ok ? "all estimator gains certified\n" : "estimator gain NOT certified for at least one node\n");
    return ok ? kExitOk : kExitValidation;
}

int cmd_validate(const SourceArgs& src, std::ostream& out) {
    const ScenarioSpec spec = resolve(src);
    out << "scenario '" << spec.name << "' is valid (" << spec.nodes.size() << " nodes, " << spec.events.size()
        << " events, " << spec.step_count() << " steps)\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"dvppsim: coordinated frequency regulation simulator for DVPP grids"};
    app.require_subcommand(1);

    SourceArgs run_src, cert_src, val_src;
    std::string out_dir, format = "csv", baseline;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<std::size_t> decimate;
    bool plots = false, weighted = false;

    auto* run_cmd = app.add_subcommand("run", "simulate a scenario and write trace, metrics and plots");
    add_source(run_cmd, run_src);
    run_cmd->add_option("--out", out_dir, std::string("output directory (default: $") + kOutputDirEnv + " or ./dvppsim-out)");
    run_cmd->add_option("--format", format, "trace format")->check(CLI::IsMember({"csv", "binary"}));
    run_cmd->add_option("--seed", seed, "override the master seed");
    run_cmd->add_option("--dt", dt, "override the integration step [s]");
    run_cmd->add_option("--decimate", decimate, "keep every k-th trace row on disk");
    run_cmd->add_option("--baseline", baseline, "preset or scenario file run with the same seed for RoCoF comparison");
    run_cmd->add_flag("--plots", plots, "write SVG figure panels");
    run_cmd->add_flag("--weighted-mean", weighted, "inertia-weighted mean grid frequency");

    auto* cert_cmd = app.add_subcommand("certify", "check estimator gains for every DVPP node");
    add_source(cert_cmd, cert_src);
    auto* val_cmd = app.add_subcommand("validate", "parse and validate a scenario");
    add_source(val_cmd, val_src);
    std::string emit_name;
    auto* presets_cmd = app.add_subcommand("presets", "list built-in scenarios or print one as a scenario file");
    presets_cmd->add_option("--emit", emit_name, "preset to print");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (run_cmd->parsed())
            return cmd_run(run_src, out_dir, format, seed, dt, decimate, plots, baseline, weighted, out, err);
        if (cert_cmd->parsed()) return cmd_certify(cert_src, out);
        if (val_cmd->parsed()) return cmd_validate(val_src, out);
        if (presets_cmd->parsed()) {
            if (!emit_name.empty()) {
                out << emit_scenario(preset(emit_name));
            } else {
                for (const auto& n : preset_names()) out << n << "\n";
            }
            return kExitOk;
        }
    } catch (const ConfigParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const LookupError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericFault& e) {
        err << "numeric fault: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace dvpp
