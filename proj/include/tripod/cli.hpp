#pragma once

// Command dispatch shared by the tripod_sim executable and its tests.

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "tripod/config.hpp"
#include "tripod/dressed.hpp"
#include "tripod/evolution.hpp"
#include "tripod/io.hpp"

namespace tripod {

inline const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names{"spectrum", "map2d",  "traces",   "decompose",
                                                "dressed",  "evolve", "contrast", "list-presets"};
    return names;
}

struct CliOptions
{
    std::optional<std::string> out; ///< data file (or stem for decompose); stdout when absent
    std::optional<std::string> svg; ///< optional plot
};

struct RunReport
{
    std::string scenario;
    double wall_time = 0.0; ///< seconds
    std::vector<std::string> outputs;
    double residual_max = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string fmt(double v, int precision = 6)
{
    std::ostringstream ss;
    ss << std::setprecision(precision) << v;
    return ss.str();
}

inline std::string vec_str(const Vector4c& v)
{
    std::string s = "(";
    for (int i = 0; i < 4; ++i) {
        if (i)
            s += ", ";
        const double re = std::abs(v(i).real()) < 1e-14 ? 0.0 : v(i).real();
        const double im = v(i).imag();
        s += fmt(re, 8);
        if (std::abs(im) > 1e-14)
            s += (im < 0 ? " - " : " + ") + fmt(std::abs(im), 8) + "i";
    }
    return s + ")";
}

// Path for one component of the decompose output: "stem_part.csv".
inline std::string part_path(const std::string& base, const std::string& part)
{
    std::string stem = base;
    if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0)
        stem.resize(stem.size() - 4);
    return stem + "_" + part + ".csv";
}

inline void emit_series(const SpectrumSeries& s, const CliOptions& opt, std::ostream& out, RunReport& rep)
{
    if (opt.out) {
        write_spectrum_csv(s, *opt.out);
        rep.outputs.push_back(*opt.out);
    } else {
        out << spectrum_csv(s);
    }
}

inline void dressed_report(const SystemParams& p, std::ostream& out)
{
    const double omega = generalized_rabi(p.omega_c, p.omega_p, p.omega_a);
    out << "Rabi frequencies (kHz): omega_c = " << fmt(p.omega_c) << ", omega_p = " << fmt(p.omega_p)
        << ", omega_a = " << fmt(p.omega_a) << "\n";
    out << "generalized Rabi frequency Omega = " << fmt(omega, 10) << " kHz\n";

    SystemParams resonant = p;
    resonant.delta_c = resonant.delta_p = resonant.delta_a = 0.0;
    const auto es = eigensystem(resonant);
    out << "eigenvalues of H at zero detuning (kHz):";
    for (int k = 0; k < 4; ++k)
        out << " " << fmt(es.values(k), 10);
    out << "\n";
    if (p.delta_c != 0.0 || p.delta_p != 0.0 || p.delta_a != 0.0) {
        const auto ed = eigensystem(p);
        out << "eigenvalues of H at the scenario detunings (kHz):";
        for (int k = 0; k < 4; ++k)
            out << " " << fmt(ed.values(k), 10);
        out << "\n";
    }

    const auto [d1, d2] = dark_states(p.omega_c, p.omega_p, p.omega_a);
    const auto [bp, bm] = bright_states(p.omega_c, p.omega_p, p.omega_a);
    out << "dressed states over |1>,|2>,|3>,|4> (zero detuning):\n";
    for (const auto* s : {&d1, &d2, &bp, &bm})
        out << "  " << std::left << std::setw(3) << to_string(s->label) << std::right << " = " << vec_str(s->amplitudes)
            << "  energy " << fmt(*s->eigenvalue, 10) << " kHz\n";

    out << "asymptotic splitting +-(Omega/sqrt2) sqrt(1 + 2 (delta/Omega)^2) vs exact eigenvalues, "
           "delta_c = -delta_A = delta:\n";
    out << "  delta_khz   formula_plus   formula_minus   exact_max   exact_min   ratio\n";
    std::vector<double> deltas{0.0, 0.25 * p.omega_c, 0.5 * p.omega_c, p.omega_c, 2.0 * p.omega_c};
    if (p.delta_c != 0.0 && p.delta_c == -p.delta_a &&
        std::find(deltas.begin(), deltas.end(), p.delta_c) == deltas.end())
        deltas.push_back(p.delta_c);
    std::sort(deltas.begin(), deltas.end());
    for (double d : deltas) {
        const auto c = compare_splitting(p.omega_c, p.omega_p, p.omega_a, d);
        out << "  " << std::setw(9) << fmt(d) << "   " << std::setw(12) << fmt(c.formula_plus, 8) << "   "
            << std::setw(13) << fmt(c.formula_minus, 8) << "   " << std::setw(9) << fmt(c.exact_outer_plus, 8)
            << "   " << std::setw(9) << fmt(c.exact_outer_minus, 8) << "   " << fmt(c.ratio, 8) << "\n";
    }
}

inline Matrix4c initial_state(int level)
{
    Matrix4c rho = Matrix4c::Zero();
    if (level == 0) {
        for (int i = 0; i < 3; ++i)
            rho(i, i) = 1.0 / 3.0;
    } else {
        rho(level - 1, level - 1) = 1.0;
    }
    return rho;
}

inline void run_command(const std::string& command, const RunSettings& rs, const CliOptions& opt,
                        std::ostream& out, RunReport& rep)
{
    const Scenario& sc = rs.scenario;
    const SystemParams& p = sc.params;
    const std::string title = sc.name;

    if (command == "spectrum" || command == "traces") {
        SpectrumSeries s = (command == "traces") ? coherence_traces(p, sc.dp_axis.values())
                                                 : probe_sweep(p, sc.dp_axis.values());
        if (rs.normalized)
            add_normalized_column(s, p);
        rep.residual_max = s.max_residual;
        emit_series(s, opt, out, rep);
        if (opt.svg) {
            std::vector<std::string> cols{"im_rho24"};
            if (command == "traces")
                cols = {"im_rho24", "re_rho12", "re_rho13", "re_rho23", "re_rho12_plus_re_rho13"};
            write_spectrum_svg(s, cols, title, *opt.svg);
            rep.outputs.push_back(*opt.svg);
        }
    } else if (command == "map2d") {
        if (!sc.d_axis)
            throw PreconditionError("map2d needs a symmetric-detuning axis (map.* keys)");
        const Map2D m = detuning_map(p, sc.dp_axis.values(), sc.d_axis->values());
        rep.residual_max = m.max_residual;
        if (opt.out) {
            write_map_csv(m, *opt.out);
            rep.outputs.push_back(*opt.out);
        } else {
            out << map_csv(m);
        }
        if (opt.svg) {
            write_map_svg(m, title, *opt.svg);
            rep.outputs.push_back(*opt.svg);
        }
    } else if (command == "decompose") {
        const std::string base = opt.out.value_or("decompose.csv");
        const Decomposition d = decomposition_compare(p, sc.dp_axis.values());
        rep.residual_max = std::max(d.tripod.max_residual, d.average.max_residual);
        const std::pair<const char*, const SpectrumSeries*> parts[] = {
            {"tripod", &d.tripod}, {"lambda_c", &d.lambda_c}, {"lambda_a", &d.lambda_a}, {"average", &d.average}};
        for (const auto& [name, series] : parts) {
            const std::string path = part_path(base, name);
            write_spectrum_csv(*series, path);
            rep.outputs.push_back(path);
        }
        if (opt.svg) {
            SpectrumSeries plot;
            plot.axis = d.tripod.axis;
            plot.columns = {{"tripod", d.tripod.column("im_rho24")},
                            {"lambda_c", d.lambda_c.column("im_rho24")},
                            {"lambda_a", d.lambda_a.column("im_rho24")},
                            {"average", d.average.column("im_rho24")}};
            write_spectrum_svg(plot, {"tripod", "lambda_c", "lambda_a", "average"}, title, *opt.svg);
            rep.outputs.push_back(*opt.svg);
        }
        const double peak = *std::max_element(d.tripod.column("im_rho24").begin(), d.tripod.column("im_rho24").end());
        out << "tripod max Im rho24 = " << fmt(peak, 10) << "\n";
        const double avg = *std::max_element(d.average.column("im_rho24").begin(), d.average.column("im_rho24").end());
        out << "lambda average max Im rho24 = " << fmt(avg, 10) << "\n";
    } else if (command == "dressed") {
        std::ostringstream text;
        dressed_report(p, text);
        out << text.str();
        if (opt.out) {
            detail::write_text(*opt.out, text.str());
            rep.outputs.push_back(*opt.out);
        }
    } else if (command == "evolve") {
        const double t_end = rs.evolve.t_end > 0.0 ? rs.evolve.t_end
                             : p.decay.gamma_pop > 0.0
                                 ? 200.0 / p.decay.gamma_pop
                                 : throw PreconditionError("evolve.t_end_ms must be set when Gamma_0 = 0");
        const double dt = rs.evolve.dt > 0.0 ? rs.evolve.dt : 0.5 * max_stable_step(p);
        if (!std::isfinite(dt))
            throw PreconditionError("evolve.dt_ms must be set when every rate is zero");
        const Trajectory traj = time_evolve(p, initial_state(rs.evolve.initial_level), t_end, dt, rs.evolve.stride);
        if (opt.out) {
            write_evolution_csv(traj, *opt.out);
            rep.outputs.push_back(*opt.out);
        } else {
            out << evolution_csv(traj);
        }
        if (opt.svg) {
            SpectrumSeries plot;
            plot.axis_name = "time_ms";
            for (const auto& smp : traj)
                plot.axis.push_back(smp.time);
            for (int k = 0; k < 4; ++k) {
                Column c{"rho" + std::to_string(k + 1) + std::to_string(k + 1), {}};
                for (const auto& smp : traj)
                    c.values.push_back(smp.rho(k, k).real());
                plot.columns.push_back(std::move(c));
            }
            write_spectrum_svg(plot, {"rho11", "rho22", "rho33", "rho44"}, title, *opt.svg);
            rep.outputs.push_back(*opt.svg);
        }
    } else if (command == "contrast") {
        const ContrastResult c = switching_contrast(p);
        std::ostringstream text;
        text << "switching_contrast = " << format_double(c.value) << "\n"
             << "on_im_rho24 = " << format_double(c.on) << "\n"
             << "on_delta_p_khz = " << format_double(c.on_delta_p) << "\n"
             << "off_im_rho24 = " << format_double(c.off) << "\n"
             << "division_guard = " << (c.division_guard ? "true" : "false") << "\n";
        out << text.str();
        if (opt.out) {
            detail::write_text(*opt.out, text.str());
            rep.outputs.push_back(*opt.out);
        }
    } else {
        throw PreconditionError("unknown command '" + command + "'");
    }
}

} // namespace detail

/// Runs one command. Module errors are rethrown with the scenario name
/// prepended, keeping their name and exit code.
inline RunReport run(const std::string& command, const Config& config, const CliOptions& opt, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    RunReport rep;
    if (command == "list-presets") {
        for (const auto& n : preset_names())
            out << n << "\n";
        rep.scenario = "catalog";
        return rep;
    }
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
        throw PreconditionError("unknown command '" + command + "'");

    const RunSettings rs = resolve(config);
    rep.scenario = rs.scenario.name;
    rep.warnings = rs.warnings;
    try {
        detail::run_command(command, rs, opt, out, rep);
    } catch (const Error& e) {
        throw Error(e.name(), e.exit_code(),
                    "scenario '" + rep.scenario + "': " + std::string(e.what()).substr(e.name().size() + 2));
    }
    if (!(rep.residual_max < 1e-8))
        rep.warnings.push_back("steady-state residual " + format_double(rep.residual_max) + " exceeds 1e-8");
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace tripod
