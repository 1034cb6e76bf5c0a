#include "schwarzlab/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "schwarzlab/assembly.hpp"
#include "schwarzlab/contour.hpp"
#include "schwarzlab/curvature.hpp"
#include "schwarzlab/mesh_io.hpp"
#include "schwarzlab/metric.hpp"

namespace schwarz {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_list(const std::vector<double>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += fmt17(values[i]);
    }
    return out;
}

std::string trim(std::string s) {
    const auto space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && space(s.front())) s.erase(s.begin());
    while (!s.empty() && space(s.back())) s.pop_back();
    return s;
}

std::string lower(std::string s) {
    for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Line-accurate config errors.
struct ParsePoint {
    const fs::path& file;
    int line;
    std::runtime_error error(const std::string& msg) const {
        return std::runtime_error(file.string() + ":" + std::to_string(line) + ": " + msg);
    }
};

double parse_double(const ParsePoint& at, const std::string& value) {
    if (value.empty()) throw at.error("empty value");
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size()) throw at.error("malformed number '" + value + "'");
    return v;
}

int parse_int(const ParsePoint& at, const std::string& value) {
    const double v = parse_double(at, value);
    const double r = std::round(v);
    if (v != r || std::abs(v) > 2e9) throw at.error("expected an integer, got '" + value + "'");
    return int(r);
}

unsigned long parse_ulong(const ParsePoint& at, const std::string& value) {
    if (value.empty()) throw at.error("empty value");
    char* end = nullptr;
    const unsigned long v = std::strtoul(value.c_str(), &end, 10);
    if (end != value.c_str() + value.size()) throw at.error("malformed unsigned integer '" + value + "'");
    return v;
}

bool parse_bool(const ParsePoint& at, const std::string& value) {
    const std::string v = lower(value);
    if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
    if (v == "off" || v == "false" || v == "no" || v == "0") return false;
    throw at.error("expected on/off, got '" + value + "'");
}

std::vector<double> parse_list(const ParsePoint& at, const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) out.push_back(parse_double(at, trim(item)));
    if (out.empty()) throw at.error("empty list");
    return out;
}

void apply_key(ExperimentConfig& cfg, const ParsePoint& at, const std::string& section,
               const std::string& key, const std::string& value) {
    SolverConfig& s = cfg.solver;
    DiagnosticsSettings& d = cfg.diagnostics;
    if (section == "experiment") {
        if (key == "m") cfg.m = parse_double(at, value);
        else if (key == "tau") cfg.tau = parse_int(at, value);
        else if (key == "theta") cfg.theta = parse_double(at, value);
        else if (key == "allow_any_theta") cfg.allow_any_theta = parse_bool(at, value);
        else if (key == "R") cfg.radii = parse_list(at, value);
        else if (key == "refinement_level") cfg.refinement_level = parse_int(at, value);
        else if (key == "n_per_arc") cfg.n_per_arc = parse_int(at, value);
        else if (key == "seed") cfg.seed = parse_ulong(at, value);
        else if (key == "output") cfg.output_dir = value;
        else throw at.error("unknown key '" + key + "' in [experiment]");
    } else if (section == "solver") {
        if (key == "max_iterations") s.max_iterations = parse_int(at, value);
        else if (key == "grad_tolerance") s.grad_tolerance = parse_double(at, value);
        else if (key == "armijo_c") s.armijo_c = parse_double(at, value);
        else if (key == "backtrack") s.backtrack = parse_double(at, value);
        else if (key == "initial_step") s.initial_step = parse_double(at, value);
        else if (key == "max_step") s.max_step = parse_double(at, value);
        else if (key == "refine_rounds") s.refine_rounds = parse_int(at, value);
        else if (key == "history_stride") s.history_stride = parse_int(at, value);
        else if (key == "condition_stride") s.condition_stride = parse_int(at, value);
        else if (key == "check_embedded") s.check_embedded = parse_bool(at, value);
        else throw at.error("unknown key '" + key + "' in [solver]");
    } else if (section == "diagnostics") {
        if (key == "residual") d.residual = parse_bool(at, value);
        else if (key == "residual_threshold") d.residual_threshold = parse_double(at, value);
        else if (key == "containment") d.containment = parse_bool(at, value);
        else if (key == "containment_threshold") d.containment_threshold = parse_double(at, value);
        else if (key == "monotonicity") d.monotonicity = parse_bool(at, value);
        else if (key == "contact_band") d.contact_band = parse_double(at, value);
        else if (key == "slices") d.slices = parse_bool(at, value);
        else if (key == "slice_phis") d.slice_phis = parse_list(at, value);
        else if (key == "area_bound") d.area_bound = parse_bool(at, value);
        else if (key == "area_bound_phi") d.area_bound_phi = parse_double(at, value);
        else if (key == "area_bound_eps") d.area_bound_eps = parse_double(at, value);
        else if (key == "area_bound_delta") d.area_bound_delta = parse_double(at, value);
        else if (key == "curvature_ratio") d.curvature_ratio = parse_bool(at, value);
        else if (key == "curvature_ratio_threshold")
            d.curvature_ratio_threshold = parse_double(at, value);
        else if (key == "stability") d.stability = parse_bool(at, value);
        else if (key == "stability_bumps") d.stability_bumps = parse_int(at, value);
        else if (key == "stability_threshold") d.stability_threshold = parse_double(at, value);
        else if (key == "blowup") d.blowup = parse_bool(at, value);
        else if (key == "blowup_slack") d.blowup_slack = parse_double(at, value);
        else if (key == "blowup_a_tolerance") d.blowup_a_tolerance = parse_double(at, value);
        else if (key == "growth") d.growth = parse_bool(at, value);
        else if (key == "growth_radii") d.growth_radii = parse_list(at, value);
        else if (key == "growth_band") d.growth_band = parse_double(at, value);
        else if (key == "total_curvature") d.total_curvature = parse_bool(at, value);
        else if (key == "total_curvature_threshold")
            d.total_curvature_threshold = parse_double(at, value);
        else if (key == "end_decay") d.end_decay = parse_bool(at, value);
        else throw at.error("unknown key '" + key + "' in [diagnostics]");
    } else {
        throw at.error("unknown section [" + section + "]");
    }
}

const char* onoff(bool v) { return v ? "on" : "off"; }

std::vector<double> resolved_growth_radii(const ExperimentConfig& cfg) {
    if (!cfg.diagnostics.growth_radii.empty()) return cfg.diagnostics.growth_radii;
    const double top = cfg.radii.back();
    return {top / 3.375, top / 2.25, top / 1.5, top};
}

void require_artifact(const fs::path& path, const char* produced_by) {
    if (!fs::exists(path))
        throw StageError(kExitConfig, "missing input artifact " + path.generic_string() +
                                          " (run the " + std::string(produced_by) +
                                          " stage first)");
}

TriMesh import_artifact(const fs::path& obj, const char* produced_by) {
    require_artifact(obj, produced_by);
    require_artifact(fs::path(obj).replace_extension(".bnd"), produced_by);
    try {
        return import_mesh(obj);
    } catch (const std::exception& e) {
        throw StageError(kExitConfig, e.what());
    }
}

bool parse_arc_tag(const std::string& name, ArcTag& tag) {
    for (ArcTag t : {ArcTag::Gamma0Horizon, ArcTag::Gamma0Radial, ArcTag::CArc,
                     ArcTag::GammaThetaRadial, ArcTag::GammaThetaHorizon})
        if (name == arc_tag_name(t)) {
            tag = t;
            return true;
        }
    return false;
}

void write_arcs_csv(const DiskMesh& dm, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw StageError(kExitConfig, "cannot write " + path.generic_string());
    out << "vertex,arc_tag,t\n";
    for (size_t v = 0; v < dm.boundary_param.size(); ++v)
        if (dm.boundary_param[v])
            out << v << "," << arc_tag_name(dm.boundary_param[v]->tag) << ","
                << fmt17(dm.boundary_param[v]->t) << "\n";
}

DiskMesh load_disk_mesh(const ArtifactPaths& ap, int k, const ExperimentConfig& cfg,
                        const char* produced_by) {
    const fs::path arcs = ap.mesh_arcs_csv(k);
    require_artifact(arcs, produced_by);
    DiskMesh dm;
    dm.mesh = import_artifact(ap.mesh_obj(k), produced_by);
    dm.boundary_param.assign(size_t(dm.mesh.vertex_count()), std::nullopt);
    dm.theta = cfg.effective_theta();
    dm.R = cfg.radii[size_t(k)];
    dm.m = cfg.m;
    dm.wedge_constrained = true;

    std::ifstream in(arcs);
    if (!in) throw StageError(kExitConfig, "cannot read " + arcs.generic_string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) continue;  // header
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string v_str, tag_str, t_str;
        if (!std::getline(row, v_str, ',') || !std::getline(row, tag_str, ',') ||
            !std::getline(row, t_str))
            throw StageError(kExitConfig, arcs.generic_string() + ":" + std::to_string(lineno) +
                                              ": expected vertex,arc_tag,t");
        const ParsePoint at{arcs, lineno};
        const int v = parse_int(at, trim(v_str));
        ArcTag tag;
        if (v < 0 || v >= dm.mesh.vertex_count() || !parse_arc_tag(trim(tag_str), tag))
            throw StageError(kExitConfig, arcs.generic_string() + ":" + std::to_string(lineno) +
                                              ": bad vertex id or arc tag");
        if (!dm.mesh.is_boundary[size_t(v)])
            throw StageError(kExitConfig, arcs.generic_string() + ":" + std::to_string(lineno) +
                                              ": arc parameter on interior vertex");
        dm.boundary_param[size_t(v)] = BoundaryParam{tag, parse_double(at, trim(t_str))};
    }
    for (int v = 0; v < dm.mesh.vertex_count(); ++v)
        if (dm.mesh.is_boundary[size_t(v)] && !dm.boundary_param[size_t(v)])
            throw StageError(kExitConfig, arcs.generic_string() + ": boundary vertex " +
                                              std::to_string(v) + " has no arc parameter");
    return dm;
}

std::string mesh_name(int k) { return "mesh_r" + std::to_string(k) + ".obj"; }

// Admissible stability test functions: a compactly supported radial bump
// profile times an azimuthal half-wave so the function vanishes on all
// four contour arcs, with boundary entries pinned to exact zero.
std::vector<std::vector<double>> radial_bump_functions(const TriMesh& mesh, double theta,
                                                       double m, double R, int count) {
    const double rh = horizon_radius(m);
    const double span = R - rh;
    std::vector<std::vector<double>> funcs;
    funcs.reserve(size_t(count));
    for (int i = 0; i < count; ++i) {
        const double center = rh + span * double(i + 1) / double(count + 1);
        const double width = 0.9 * span / double(count + 1);
        std::vector<double> f(mesh.positions.size(), 0.0);
        for (size_t v = 0; v < mesh.positions.size(); ++v) {
            if (mesh.is_boundary[v]) continue;
            const Vec3& p = mesh.positions[v];
            const double s = (norm(p) - center) / width;
            if (std::abs(s) >= 1.0) continue;
            const double radial = (1.0 - s * s) * (1.0 - s * s);
            const double az = std::clamp(std::atan2(p.y, p.x) / theta, 0.0, 1.0);
            f[v] = radial * std::sin(kPi * az);
        }
        funcs.push_back(std::move(f));
    }
    return funcs;
}

void add_entry(DiagnosticsReport& report, std::string id, double value, double threshold,
               bool pass, std::string provenance) {
    DiagnosticsEntry e;
    e.check_id = std::move(id);
    e.value = value;
    e.threshold = threshold;
    e.pass = pass;
    e.provenance = std::move(provenance);
    report.entries.push_back(std::move(e));
}

}  // namespace

double ExperimentConfig::effective_theta() const {
    if (tau >= 1) return kPi / double(tau + 1);
    return theta;
}

int ExperimentConfig::effective_tau() const {
    if (tau >= 1) return tau;
    if (!(theta > 0.0)) return 0;
    const long n = std::llround(kPi / theta);
    if (n >= 2 && std::abs(theta - kPi / double(n)) <= 1e-9) return int(n) - 1;
    return 0;
}

bool ExperimentConfig::assembly_enabled() const { return effective_tau() >= 1; }

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    ExperimentConfig cfg;
    cfg.tau = 0;  // the file must pick tau or theta explicitly

    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const ParsePoint at{path, lineno};
        const size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw at.error("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw at.error("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw at.error("empty key");
        if (section.empty()) throw at.error("key before any [section]");
        apply_key(cfg, at, section, key, value);
    }
    validate_config(cfg);
    return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
    const auto fail = [](const std::string& msg) {
        return std::runtime_error("config error: " + msg);
    };
    if (!(cfg.m > 0.0) || !std::isfinite(cfg.m)) throw fail("m must be positive");
    const bool has_tau = cfg.tau >= 1;
    const bool has_theta = cfg.theta > 0.0;
    if (cfg.tau < 0) throw fail("tau must be >= 1");
    if (has_tau == has_theta) throw fail("set exactly one of tau (>= 1) or theta");
    if (has_theta) {
        if (!(cfg.theta <= kPi / 2 + 1e-15)) throw fail("theta must lie in (0, pi/2]");
        if (!cfg.allow_any_theta && cfg.effective_tau() < 1)
            throw fail(
                "theta is not of the form pi/N; set allow_any_theta = on to explore "
                "(assembly stays disabled)");
    }
    if (cfg.radii.empty()) throw fail("R schedule must be nonempty");
    for (size_t i = 0; i + 1 < cfg.radii.size(); ++i)
        if (!(cfg.radii[i] < cfg.radii[i + 1])) throw fail("R schedule must be strictly increasing");
    if (!(cfg.radii.front() > horizon_radius(cfg.m)))
        throw fail("R schedule must stay outside the horizon radius m/2");
    if (cfg.refinement_level < 0 || cfg.refinement_level > 8)
        throw fail("refinement_level must lie in [0, 8]");
    if (cfg.n_per_arc < 2) throw fail("n_per_arc must be >= 2");
    if (cfg.output_dir.empty()) throw fail("output directory must be set");

    const SolverConfig& s = cfg.solver;
    if (s.max_iterations < 1) throw fail("solver max_iterations must be >= 1");
    if (!(s.grad_tolerance > 0.0)) throw fail("solver grad_tolerance must be positive");
    if (!(s.armijo_c > 0.0 && s.armijo_c < 1.0)) throw fail("solver armijo_c must lie in (0, 1)");
    if (!(s.backtrack > 0.0 && s.backtrack < 1.0)) throw fail("solver backtrack must lie in (0, 1)");
    if (!(s.initial_step > 0.0)) throw fail("solver initial_step must be positive");
    if (!(s.max_step >= s.initial_step)) throw fail("solver max_step must be >= initial_step");
    if (s.refine_rounds < 0) throw fail("solver refine_rounds must be >= 0");
    if (s.history_stride < 1) throw fail("solver history_stride must be >= 1");
    if (s.condition_stride < 0) throw fail("solver condition_stride must be >= 0");

    const DiagnosticsSettings& d = cfg.diagnostics;
    if (!(d.residual_threshold > 0.0)) throw fail("residual_threshold must be positive");
    if (!(d.containment_threshold > 0.0)) throw fail("containment_threshold must be positive");
    if (d.slices && d.slice_phis.empty()) throw fail("slices enabled with empty slice_phis");
    for (double phi : d.slice_phis)
        if (!(phi > 0.0 && phi < kPi / 2)) throw fail("slice phis must lie in (0, pi/2)");
    if (!(d.area_bound_phi > 0.0 && d.area_bound_phi < kPi / 2))
        throw fail("area_bound_phi must lie in (0, pi/2)");
    if (!(d.area_bound_eps > 0.0 && d.area_bound_eps < d.area_bound_delta))
        throw fail("area bound needs 0 < eps < delta");
    if (!(d.contact_band >= 0.0 && d.contact_band < 0.5))
        throw fail("contact_band must lie in [0, 0.5)");
    if (!(d.curvature_ratio_threshold > 0.0))
        throw fail("curvature_ratio_threshold must be positive");
    if (d.stability_bumps < 1) throw fail("stability_bumps must be >= 1");
    if (!(d.blowup_slack >= 1.0)) throw fail("blowup_slack must be >= 1");
    if (!(d.blowup_a_tolerance > 0.0)) throw fail("blowup_a_tolerance must be positive");
    if (!(d.growth_band > 0.0)) throw fail("growth_band must be positive");
    if (!(d.total_curvature_threshold > 0.0))
        throw fail("total_curvature_threshold must be positive");
    if (!d.growth_radii.empty()) {
        if (d.growth_radii.size() < 3) throw fail("growth_radii needs >= 3 entries");
        for (size_t i = 0; i + 1 < d.growth_radii.size(); ++i)
            if (!(d.growth_radii[i] < d.growth_radii[i + 1]))
                throw fail("growth_radii must be strictly increasing");
        if (!(d.growth_radii.front() > horizon_radius(cfg.m)))
            throw fail("growth_radii must stay outside the horizon radius m/2");
        if (d.growth_radii.back() > cfg.radii.back() * (1.0 + 1e-12))
            throw fail("growth_radii must stay within the largest R");
    } else if (d.growth && !(cfg.radii.back() / 3.375 > horizon_radius(cfg.m))) {
        throw fail("derived growth ladder dips inside the horizon; set growth_radii");
    }
    if ((d.growth || d.total_curvature || d.end_decay) && !cfg.assembly_enabled())
        throw fail("growth/total_curvature/end_decay need the assembled surface (theta = pi/N)");
    if (d.total_curvature && cfg.radii.size() < 2)
        throw fail("total_curvature needs at least two radii");
}

std::string config_echo(const ExperimentConfig& cfg) {
    const SolverConfig& s = cfg.solver;
    const DiagnosticsSettings& d = cfg.diagnostics;
    std::ostringstream out;
    out << "[experiment]\n";
    out << "m = " << fmt17(cfg.m) << "\n";
    if (cfg.tau >= 1)
        out << "tau = " << cfg.tau << "\n";
    else
        out << "theta = " << fmt17(cfg.theta) << "\n";
    out << "allow_any_theta = " << onoff(cfg.allow_any_theta) << "\n";
    out << "R = " << join_list(cfg.radii) << "\n";
    out << "refinement_level = " << cfg.refinement_level << "\n";
    out << "n_per_arc = " << cfg.n_per_arc << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "output = " << cfg.output_dir.generic_string() << "\n";
    out << "[solver]\n";
    out << "max_iterations = " << s.max_iterations << "\n";
    out << "grad_tolerance = " << fmt17(s.grad_tolerance) << "\n";
    out << "armijo_c = " << fmt17(s.armijo_c) << "\n";
    out << "backtrack = " << fmt17(s.backtrack) << "\n";
    out << "initial_step = " << fmt17(s.initial_step) << "\n";
    out << "max_step = " << fmt17(s.max_step) << "\n";
    out << "refine_rounds = " << s.refine_rounds << "\n";
    out << "history_stride = " << s.history_stride << "\n";
    out << "condition_stride = " << s.condition_stride << "\n";
    out << "check_embedded = " << onoff(s.check_embedded) << "\n";
    out << "[diagnostics]\n";
    out << "residual = " << onoff(d.residual) << "\n";
    out << "residual_threshold = " << fmt17(d.residual_threshold) << "\n";
    out << "containment = " << onoff(d.containment) << "\n";
    out << "containment_threshold = " << fmt17(d.containment_threshold) << "\n";
    out << "monotonicity = " << onoff(d.monotonicity) << "\n";
    out << "contact_band = " << fmt17(d.contact_band) << "\n";
    out << "slices = " << onoff(d.slices) << "\n";
    out << "slice_phis = " << join_list(d.slice_phis) << "\n";
    out << "area_bound = " << onoff(d.area_bound) << "\n";
    out << "area_bound_phi = " << fmt17(d.area_bound_phi) << "\n";
    out << "area_bound_eps = " << fmt17(d.area_bound_eps) << "\n";
    out << "area_bound_delta = " << fmt17(d.area_bound_delta) << "\n";
    out << "curvature_ratio = " << onoff(d.curvature_ratio) << "\n";
    out << "curvature_ratio_threshold = " << fmt17(d.curvature_ratio_threshold) << "\n";
    out << "stability = " << onoff(d.stability) << "\n";
    out << "stability_bumps = " << d.stability_bumps << "\n";
    out << "stability_threshold = " << fmt17(d.stability_threshold) << "\n";
    out << "blowup = " << onoff(d.blowup) << "\n";
    out << "blowup_slack = " << fmt17(d.blowup_slack) << "\n";
    out << "blowup_a_tolerance = " << fmt17(d.blowup_a_tolerance) << "\n";
    out << "growth = " << onoff(d.growth) << "\n";
    out << "growth_radii = " << join_list(resolved_growth_radii(cfg)) << "\n";
    out << "growth_band = " << fmt17(d.growth_band) << "\n";
    out << "total_curvature = " << onoff(d.total_curvature) << "\n";
    out << "total_curvature_threshold = " << fmt17(d.total_curvature_threshold) << "\n";
    out << "end_decay = " << onoff(d.end_decay) << "\n";
    return out.str();
}

std::filesystem::path ArtifactPaths::mesh_obj(int k) const {
    return dir / ("mesh_r" + std::to_string(k) + ".obj");
}
std::filesystem::path ArtifactPaths::mesh_bnd(int k) const {
    return dir / ("mesh_r" + std::to_string(k) + ".bnd");
}
std::filesystem::path ArtifactPaths::mesh_arcs_csv(int k) const {
    return dir / ("mesh_r" + std::to_string(k) + ".arcs.csv");
}
std::filesystem::path ArtifactPaths::solve_csv(int k) const {
    return dir / ("solve_r" + std::to_string(k) + ".csv");
}
std::filesystem::path ArtifactPaths::copy_obj(int element) const {
    char name[32];
    std::snprintf(name, sizeof(name), "copy_%02d.obj", element);
    return dir / "copies" / name;
}

void stage_contour(const ExperimentConfig& cfg) {
    const ArtifactPaths ap(cfg.output_dir);
    fs::create_directories(ap.dir);
    Contour contour;
    try {
        contour = build_contour(cfg.effective_theta(), cfg.radii.front(), cfg.m, cfg.n_per_arc);
    } catch (const std::exception& e) {
        throw StageError(kExitConfig, e.what());
    }
    export_contour_csv(contour, ap.contour_csv());
    std::cout << "[contour] wrote " << ap.contour_csv().generic_string() << "\n";
}

void stage_solve(const ExperimentConfig& cfg) {
    const ArtifactPaths ap(cfg.output_dir);
    fs::create_directories(ap.dir);
    DiskMesh dm;
    try {
        dm = init_disk_mesh(build_contour(cfg.effective_theta(), cfg.radii.front(), cfg.m,
                                          cfg.n_per_arc),
                            cfg.refinement_level);
    } catch (const std::exception& e) {
        throw StageError(kExitConfig, e.what());
    }
    SolveReport report;
    try {
        report = solve_plateau(dm, cfg.solver);
    } catch (const std::exception& e) {
        throw StageError(kExitSolver, std::string("solver failure: ") + e.what());
    }
    export_mesh(dm.mesh, ap.mesh_obj(0));
    write_arcs_csv(dm, ap.mesh_arcs_csv(0));
    export_solve_report_csv(report, ap.solve_csv(0));
    std::cout << "[solve] R=" << fmt17(cfg.radii.front()) << " iterations=" << report.iterations
              << " area=" << fmt17(report.final_area)
              << " residual=" << fmt17(report.final_residual) << " (" << report.stop_reason
              << ")\n";
}

void stage_sweep(const ExperimentConfig& cfg) {
    const ArtifactPaths ap(cfg.output_dir);
    fs::create_directories(ap.dir);
    DiskMesh start = load_disk_mesh(ap, 0, cfg, "solve");
    SweepResult sweep;
    try {
        sweep = continue_sweep(std::move(start), cfg.radii, cfg.solver);
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(kExitSolver, std::string("solver failure: ") + e.what());
    }
    for (size_t k = 1; k < sweep.meshes.size(); ++k) {
        export_mesh(sweep.meshes[k].mesh, ap.mesh_obj(int(k)));
        write_arcs_csv(sweep.meshes[k], ap.mesh_arcs_csv(int(k)));
        export_solve_report_csv(sweep.reports[k], ap.solve_csv(int(k)));
    }
    std::ofstream out(ap.hausdorff_csv());
    if (!out) throw StageError(kExitConfig, "cannot write " + ap.hausdorff_csv().generic_string());
    out << "pair,R_from,R_to,hausdorff\n";
    for (size_t i = 0; i < sweep.hausdorff.size(); ++i)
        out << i << "," << fmt17(cfg.radii[i]) << "," << fmt17(cfg.radii[i + 1]) << ","
            << fmt17(sweep.hausdorff[i]) << "\n";
    std::cout << "[sweep] radii " << join_list(cfg.radii) << " solved ("
              << sweep.meshes.back().mesh.triangle_count() << " triangles at R="
              << fmt17(cfg.radii.back()) << ")\n";
}

void stage_assemble(const ExperimentConfig& cfg) {
    if (!cfg.assembly_enabled())
        throw StageError(kExitConfig,
                         "assembly disabled: theta is not of the form pi/N (tau unavailable)");
    const ArtifactPaths ap(cfg.output_dir);
    const int last = int(cfg.radii.size()) - 1;
    const TriMesh piece = import_artifact(ap.mesh_obj(last), "sweep");
    const int tau = cfg.effective_tau();
    const IsometryGroup group = generate_group(tau, cfg.m);
    const std::vector<TriMesh> copies = orbit_meshes(piece, group);
    fs::create_directories(ap.dir / "copies");
    for (size_t j = 0; j < copies.size(); ++j) export_mesh(copies[j], ap.copy_obj(int(j)));

    WeldedSurface welded;
    try {
        welded = weld_copies(copies, default_weld_tolerance(cfg.m));
    } catch (const std::exception& e) {
        throw StageError(kExitWelding, std::string("welding failure: ") + e.what());
    }
    SurfaceTopology topo;
    try {
        topo = euler_genus(welded);
    } catch (const std::exception& e) {
        throw StageError(kExitWelding, std::string("welding failure: ") + e.what());
    }
    if (!topo.connected || !topo.oriented || topo.genus != tau)
        throw StageError(kExitWelding,
                         "welding failure: expected a connected oriented genus-" +
                             std::to_string(tau) + " surface, got chi=" + std::to_string(topo.chi) +
                             " boundary=" + std::to_string(topo.boundary_components) +
                             " genus=" + std::to_string(topo.genus) +
                             (topo.connected ? "" : " (disconnected)") +
                             (topo.oriented ? "" : " (unoriented)"));

    const double sym = symmetry_residual(welded, group);
    const SeamDecomposition seams = seam_decomposition(welded, group);
    export_mesh(welded.mesh, ap.welded_obj());
    export_provenance_csv(welded, ap.provenance_csv().string());

    const EulerCharacteristic euler = euler_characteristic(welded.mesh);
    std::ofstream out(ap.assembly_txt());
    if (!out) throw StageError(kExitConfig, "cannot write " + ap.assembly_txt().generic_string());
    out << "tau = " << tau << "\n";
    out << "group_elements = " << group.elements.size() << "\n";
    out << "weld_tolerance = " << fmt17(welded.weld_tolerance) << "\n";
    out << "vertices = " << euler.vertices << "\n";
    out << "edges = " << euler.edges << "\n";
    out << "faces = " << euler.faces << "\n";
    out << "chi = " << topo.chi << "\n";
    out << "boundary_components = " << topo.boundary_components << "\n";
    out << "genus = " << topo.genus << "\n";
    out << "connected = " << onoff(topo.connected) << "\n";
    out << "oriented = " << onoff(topo.oriented) << "\n";
    out << "symmetry_residual = " << fmt17(sym) << "\n";
    out << "seam_meridians = " << seams.meridian_count << "\n";
    out << "seam_rays = " << seams.ray_count << "\n";
    out << "seam_unclassified = " << seams.unclassified_edges << "\n";
    out << "seam_max_azimuth_error = " << fmt17(seams.max_azimuth_error) << "\n";
    out << "seam_max_pole_gap_error = " << fmt17(seams.max_pole_gap_error) << "\n";
    out << "seam_decomposed = " << onoff(seams.decomposed) << "\n";
    if (!seams.detail.empty()) out << "seam_detail = " << seams.detail << "\n";
    std::cout << "[assemble] genus=" << topo.genus << " chi=" << topo.chi
              << " boundary=" << topo.boundary_components << " symmetry_residual=" << fmt17(sym)
              << " seams=" << seams.meridian_count << "+" << seams.ray_count << "\n";
}

DiagnosticsReport stage_diagnose(const ExperimentConfig& cfg) {
    const ArtifactPaths ap(cfg.output_dir);
    fs::create_directories(ap.dir);
    const DiagnosticsSettings& d = cfg.diagnostics;
    const double theta = cfg.effective_theta();
    const int last = int(cfg.radii.size()) - 1;
    DiagnosticsReport report;

    const bool need_sweep = d.monotonicity || d.curvature_ratio;
    const bool need_final = need_sweep || d.residual || d.containment || d.slices ||
                            d.area_bound || d.stability || d.blowup;
    const bool need_weld = d.growth || d.total_curvature || d.end_decay;

    std::vector<TriMesh> sweep_meshes;
    if (need_sweep)
        for (int k = 0; k <= last; ++k)
            sweep_meshes.push_back(import_artifact(ap.mesh_obj(k), k == 0 ? "solve" : "sweep"));
    TriMesh final_only;
    if (!need_sweep && need_final)
        final_only = import_artifact(ap.mesh_obj(last), last == 0 ? "solve" : "sweep");
    const TriMesh* final_mesh = need_sweep ? &sweep_meshes.back()
                                           : (need_final ? &final_only : nullptr);

    WeldedSurface welded;
    if (need_weld) {
        welded.mesh = import_artifact(ap.welded_obj(), "assemble");
        welded.weld_tolerance = default_weld_tolerance(cfg.m);
    }

    if (d.residual) {
        const MeanCurvatureStats st = mean_curvature_residual(cfg.m, *final_mesh);
        add_entry(report, "residual", st.sup, d.residual_threshold,
                  st.sup <= d.residual_threshold, mesh_name(last) + " sup |H_g| estimate");
    }
    if (d.containment) {
        const ContainmentReport c = containment_check(*final_mesh, theta, cfg.m);
        add_entry(report, "containment", c.worst, d.containment_threshold,
                  c.worst <= d.containment_threshold,
                  mesh_name(last) + " worst face " + std::to_string(c.worst_face));
    }
    if (d.monotonicity) {
        const MonotonicityReport mono =
            monotonicity_check(sweep_meshes, theta, cfg.m, d.contact_band);
        const bool pass = mono.intersection_free && mono.one_sided;
        std::string detail = pass ? "min_separation_g=" + fmt17(mono.min_separation_g)
                                  : (mono.detail.empty() ? "ordering flip" : mono.detail);
        if (mono.contact_crossings > 0)
            detail += " (contact_crossings=" + std::to_string(mono.contact_crossings) + ")";
        add_entry(report, "monotonicity", double(mono.crossings), 0.0, pass, detail);
    }
    if (d.slices)
        for (size_t i = 0; i < d.slice_phis.size(); ++i) {
            const SliceReport s = plane_slice_check(*final_mesh, theta, d.slice_phis[i], cfg.m);
            add_entry(report, "slice_" + std::to_string(i), double(s.components), 1.0,
                      s.components == 1,
                      "phi=" + fmt17(d.slice_phis[i]) + " endpoint_err=" +
                          fmt17(std::max(s.endpoint_error_a, s.endpoint_error_b)) +
                          (s.transverse ? "" : " (tangential)"));
        }
    if (d.area_bound) {
        const WedgeDomain dom{theta, d.area_bound_phi, d.area_bound_eps, d.area_bound_delta,
                              cfg.m};
        const AreaBoundReport ab = area_bound_check(*final_mesh, dom, cfg.m);
        add_entry(report, "area_bound", ab.lhs, ab.rhs, ab.lhs <= ab.rhs,
                  "phi=" + fmt17(d.area_bound_phi) + " eps=" + fmt17(d.area_bound_eps) +
                      " delta=" + fmt17(d.area_bound_delta) +
                      " straddling=" + std::to_string(ab.straddling_triangles));
    }
    if (d.curvature_ratio) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        std::string sups;
        for (size_t k = 0; k < sweep_meshes.size(); ++k) {
            const double s = curvature_sup_product(cfg.m, sweep_meshes[k], d.contact_band);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
            if (k) sups += ", ";
            sups += fmt17(s);
        }
        const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        add_entry(report, "curvature_ratio", ratio, d.curvature_ratio_threshold,
                  ratio < d.curvature_ratio_threshold, "sup products [" + sups + "]");
    }
    if (d.stability) {
        const auto funcs = radial_bump_functions(*final_mesh, theta, cfg.m, cfg.radii.back(),
                                                 d.stability_bumps);
        const StabilityReport st = stability_check(*final_mesh, cfg.m, funcs);
        add_entry(report, "stability", st.min_q_normalized, d.stability_threshold,
                  st.min_q_normalized >= d.stability_threshold,
                  "bumps=" + std::to_string(st.functions) +
                      " unfitted_support=" + std::to_string(st.unfitted_support));
    }
    if (d.blowup) {
        const auto samples = second_form_norm(cfg.m, *final_mesh);
        const double rh = horizon_radius(cfg.m);
        int best = -1;
        for (size_t i = 0; i < samples.size(); ++i) {
            const Vec3& p = final_mesh->positions[size_t(samples[i].vertex)];
            // Skip the obstacle contact band; fits there see parametrization
            // noise, not curvature (same scoping as curvature_sup_product).
            if (norm(p) <= rh * (1.0 + d.contact_band) || std::abs(p.z) <= d.contact_band * rh)
                continue;
            if (best < 0 || samples[i].a_norm_g > samples[size_t(best)].a_norm_g) best = int(i);
        }
        if (best < 0 || !(samples[size_t(best)].a_norm_g > 0.0)) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            add_entry(report, "blowup_h", nan, 0.0, false, "no curvature fit available");
            add_entry(report, "blowup_a", nan, 0.0, false, "no curvature fit available");
        } else {
            const Vec3 q = final_mesh->positions[size_t(samples[size_t(best)].vertex)];
            const double lambda = samples[size_t(best)].a_norm_g;
            const BlowupReport b =
                blowup_scaling_check(*final_mesh, cfg.m, q, lambda, d.contact_band);
            add_entry(report, "blowup_h", b.h_sup_rescaled, b.h_bound * d.blowup_slack,
                      b.h_sup_rescaled <= b.h_bound * d.blowup_slack,
                      "lambda=" + fmt17(lambda) + " |q|=" + fmt17(norm(q)));
            const double rel = std::abs(b.a_origin - b.a_target) / b.a_target;
            add_entry(report, "blowup_a", rel, d.blowup_a_tolerance,
                      std::isfinite(rel) && rel <= d.blowup_a_tolerance,
                      "a_origin=" + fmt17(b.a_origin) + " a_target=" + fmt17(b.a_target));
        }
    }
    if (d.growth) {
        const std::vector<double> radii_g = resolved_growth_radii(cfg);
        try {
            const GrowthFit fit = area_growth_fit(welded, cfg.m, radii_g);
            add_entry(report, "growth_exponent", fit.exponent, d.growth_band,
                      std::abs(fit.exponent - 2.0) <= d.growth_band,
                      "radii [" + join_list(radii_g) + "], pass iff |exponent-2| <= threshold");
        } catch (const std::exception& e) {
            add_entry(report, "growth_exponent", std::numeric_limits<double>::quiet_NaN(),
                      d.growth_band, false, e.what());
        }
    }
    if (d.total_curvature) {
        try {
            const TriMesh prev_piece = import_artifact(ap.mesh_obj(last - 1), "sweep");
            const IsometryGroup group = generate_group(cfg.effective_tau(), cfg.m);
            const WeldedSurface prev =
                weld_copies(orbit_meshes(prev_piece, group), default_weld_tolerance(cfg.m));
            const double k_prev =
                total_curvature_g(cfg.m, prev.mesh, QuadratureRule::EdgeMidpoints3).abs_sum;
            const double k_last =
                total_curvature_g(cfg.m, welded.mesh, QuadratureRule::EdgeMidpoints3).abs_sum;
            const double drift = std::abs(k_last - k_prev) / k_last;
            add_entry(report, "total_curvature_drift", drift, d.total_curvature_threshold,
                      drift < d.total_curvature_threshold,
                      "total |K| [" + fmt17(k_prev) + ", " + fmt17(k_last) + "]");
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            add_entry(report, "total_curvature_drift", std::numeric_limits<double>::quiet_NaN(),
                      d.total_curvature_threshold, false, e.what());
        }
    }
    if (d.end_decay) {
        const std::vector<double> radii_g = resolved_growth_radii(cfg);
        const std::vector<double> series = end_asymptotics(welded, radii_g);
        double tail = std::numeric_limits<double>::quiet_NaN();
        std::string listing;
        for (size_t i = 0; i < series.size(); ++i) {
            if (std::isfinite(series[i])) tail = series[i];
            if (i) listing += ", ";
            listing += fmt17(series[i]);
        }
        add_entry(report, "end_decay", tail, 0.0, non_increasing_tail(series),
                  "sup|z| per annulus [" + listing + "]");
    }

    export_diagnostics_csv(report, ap.diagnostics_csv());
    std::cout << diagnostics_summary(report);
    return report;
}

DiagnosticsReport diagnose_mesh(const ExperimentConfig& cfg, const fs::path& mesh_path) {
    if (!fs::exists(mesh_path))
        throw StageError(kExitConfig, "missing input artifact " + mesh_path.generic_string());
    TriMesh mesh;
    try {
        mesh = import_mesh(mesh_path);
    } catch (const std::exception& e) {
        throw StageError(kExitConfig, e.what());
    }
    DiagnosticsReport report;
    try {
        const MeanCurvatureStats st = mean_curvature_residual(cfg.m, mesh);
        add_entry(report, "residual", st.sup, cfg.diagnostics.residual_threshold,
                  st.sup <= cfg.diagnostics.residual_threshold,
                  mesh_path.filename().generic_string() + " sup |H_g| estimate");
        add_entry(report, "residual_l2", st.l2, 0.0, true, "informational");
        add_entry(report, "area_g",
                  mesh_area_g(cfg.m, mesh, QuadratureRule::EdgeMidpoints3), 0.0, true,
                  "informational");
    } catch (const std::exception& e) {
        throw StageError(kExitConfig, std::string("diagnose failed: ") + e.what());
    }
    try {
        const TotalCurvature tc = total_curvature_g(cfg.m, mesh, QuadratureRule::EdgeMidpoints3);
        add_entry(report, "total_abs_curvature", tc.abs_sum, 0.0, true, "informational");
    } catch (const std::exception& e) {
        add_entry(report, "total_abs_curvature", std::numeric_limits<double>::quiet_NaN(), 0.0,
                  true, e.what());
    }
    const ArtifactPaths ap(cfg.output_dir);
    fs::create_directories(ap.dir);
    const fs::path out = ap.dir / ("diagnose_" + mesh_path.stem().generic_string() + ".csv");
    export_diagnostics_csv(report, out);
    std::cout << diagnostics_summary(report);
    return report;
}

void stage_export(const ExperimentConfig& cfg) {
    const ArtifactPaths ap(cfg.output_dir);
    fs::create_directories(ap.dir);
    const int last = int(cfg.radii.size()) - 1;
    const fs::path source = cfg.assembly_enabled() ? ap.welded_obj() : ap.mesh_obj(last);
    const TriMesh mesh = import_artifact(source, cfg.assembly_enabled() ? "assemble" : "sweep");
    export_mesh(mesh, ap.surface_obj());
    write_manifest(cfg);
    std::cout << "[export] wrote " << ap.surface_obj().generic_string() << " and "
              << ap.manifest_txt().generic_string() << "\n";
}

int run_pipeline(const ExperimentConfig& cfg) {
    try {
        validate_config(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        stage_contour(cfg);
        stage_solve(cfg);
        stage_sweep(cfg);
        if (cfg.assembly_enabled()) stage_assemble(cfg);
        const DiagnosticsReport report = stage_diagnose(cfg);
        stage_export(cfg);
        if (!report.all_pass()) {
            std::cerr << "error: diagnostics failed\n";
            return kExitDiagnostics;
        }
        return kExitOk;
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

std::string sha256_file_hex(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StageError(kExitConfig, "missing input artifact " + path.generic_string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
    if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("EVP_DigestInit_ex failed");
    }
    std::vector<char> buf(size_t(1) << 16);
    while (in.good()) {
        in.read(buf.data(), std::streamsize(buf.size()));
        const std::streamsize got = in.gcount();
        if (got > 0) EVP_DigestUpdate(ctx, buf.data(), size_t(got));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    static const char* digits = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        hex += digits[md[i] >> 4];
        hex += digits[md[i] & 15];
    }
    return hex;
}

void write_manifest(const ExperimentConfig& cfg) {
    const ArtifactPaths ap(cfg.output_dir);
    std::vector<fs::path> declared;
    declared.push_back(ap.contour_csv());
    for (int k = 0; k < int(cfg.radii.size()); ++k) {
        declared.push_back(ap.mesh_obj(k));
        declared.push_back(ap.mesh_bnd(k));
        declared.push_back(ap.mesh_arcs_csv(k));
        declared.push_back(ap.solve_csv(k));
    }
    declared.push_back(ap.hausdorff_csv());
    if (cfg.assembly_enabled()) {
        const int order = 4 * cfg.effective_tau() + 4;
        for (int j = 0; j < order; ++j) {
            declared.push_back(ap.copy_obj(j));
            declared.push_back(fs::path(ap.copy_obj(j)).replace_extension(".bnd"));
        }
        declared.push_back(ap.welded_obj());
        declared.push_back(ap.welded_bnd());
        declared.push_back(ap.provenance_csv());
        declared.push_back(ap.assembly_txt());
    }
    declared.push_back(ap.diagnostics_csv());
    declared.push_back(ap.surface_obj());
    declared.push_back(fs::path(ap.surface_obj()).replace_extension(".bnd"));

    std::vector<std::pair<std::string, std::string>> rows;
    for (const fs::path& p : declared)
        if (fs::exists(p)) rows.emplace_back(fs::relative(p, ap.dir).generic_string(),
                                             sha256_file_hex(p));
    std::sort(rows.begin(), rows.end());

    std::ofstream out(ap.manifest_txt());
    if (!out) throw StageError(kExitConfig, "cannot write " + ap.manifest_txt().generic_string());
    out << "# config\n" << config_echo(cfg) << "# artifacts\n";
    for (const auto& [rel, hash] : rows) out << rel << "  " << hash << "\n";
}

}  // namespace schwarz
