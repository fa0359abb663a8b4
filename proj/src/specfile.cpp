#include "kinopt/specfile.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kinopt {

std::string to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::Quadratic: return "quadratic";
        case ProblemKind::Rosenbrock: return "rosenbrock";
        case ProblemKind::ToyClassifier: return "toy_classifier";
    }
    throw std::logic_error("unknown problem kind");
}

ProblemKind problem_kind_from_string(const std::string& name) {
    if (name == "quadratic") return ProblemKind::Quadratic;
    if (name == "rosenbrock") return ProblemKind::Rosenbrock;
    if (name == "toy_classifier") return ProblemKind::ToyClassifier;
    throw std::invalid_argument("unknown problem kind: '" + name + "'");
}

std::string to_string(InitMode m) {
    switch (m) {
        case InitMode::Ones: return "ones";
        case InitMode::Zeros: return "zeros";
        case InitMode::Explicit: return "explicit";
        case InitMode::RandomBall: return "random_ball";
    }
    throw std::logic_error("unknown init mode");
}

InitMode init_mode_from_string(const std::string& name) {
    if (name == "ones") return InitMode::Ones;
    if (name == "zeros") return InitMode::Zeros;
    if (name == "explicit") return InitMode::Explicit;
    if (name == "random_ball") return InitMode::RandomBall;
    throw std::invalid_argument("unknown init mode: '" + name + "'");
}

std::string to_string(GridMetric m) {
    switch (m) {
        case GridMetric::FinalLoss: return "final_loss";
        case GridMetric::BestLoss: return "best_loss";
        case GridMetric::TestAccuracyProxy: return "test_accuracy_proxy";
    }
    throw std::logic_error("unknown grid metric");
}

GridMetric grid_metric_from_string(const std::string& name) {
    if (name == "final_loss") return GridMetric::FinalLoss;
    if (name == "best_loss") return GridMetric::BestLoss;
    if (name == "test_accuracy_proxy") return GridMetric::TestAccuracyProxy;
    throw std::invalid_argument("unknown grid metric: '" + name + "'");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("key '" + key + "': cannot parse '" + v +
                                    "' as a real number");
    }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
        const unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return u;
    } catch (const std::exception&) {
        throw std::invalid_argument("key '" + key + "': cannot parse '" + v +
                                    "' as a non-negative integer");
    }
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("key '" + key + "': cannot parse '" + v +
                                "' as a boolean");
}

Vec parse_vec(const std::string& v, const std::string& key) {
    Vec out;
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(parse_double(trim(cell), key));
    if (out.empty())
        throw std::invalid_argument("key '" + key + "': empty vector value");
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(const Vec& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += fmt(v[i]);
    }
    return out;
}

}  // namespace

FullSpec parse_spec(std::istream& is) {
    FullSpec spec;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 'key = value', got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": empty key or value in '" + t + "'");

        RunSpec& r = spec.run;
        if (key == "spec.id") r.id = val;
        else if (key == "problem.kind") r.problem.kind = problem_kind_from_string(val);
        else if (key == "problem.dim") r.problem.dim = parse_u64(val, key);
        else if (key == "problem.min_eig") r.problem.min_eig = parse_double(val, key);
        else if (key == "problem.max_eig") r.problem.max_eig = parse_double(val, key);
        else if (key == "problem.rotate") r.problem.rotate = parse_bool(val, key);
        else if (key == "problem.seed") r.problem.seed = parse_u64(val, key);
        else if (key == "problem.a") r.problem.a = parse_double(val, key);
        else if (key == "problem.b") r.problem.b = parse_double(val, key);
        else if (key == "problem.n_examples") r.problem.n_examples = parse_u64(val, key);
        else if (key == "problem.n_features") r.problem.n_features = parse_u64(val, key);
        else if (key == "problem.hidden") r.problem.hidden = parse_u64(val, key);
        else if (key == "problem.batch_size") r.problem.batch_size = parse_u64(val, key);
        else if (key == "optimizer.kind") r.optimizer = optimizer_kind_from_string(val);
        else if (key == "optimizer.schedule")
            r.schedule.kind = schedule_kind_from_string(val);
        else if (key == "optimizer.mu_max") r.schedule.mu_max = parse_double(val, key);
        else if (key == "hp.dt") r.hp.dt = parse_double(val, key);
        else if (key == "hp.gamma") r.hp.gamma = parse_double(val, key);
        else if (key == "hp.alpha") r.hp.alpha = parse_double(val, key);
        else if (key == "hp.rho") r.hp.rho = parse_double(val, key);
        else if (key == "hp.c") r.hp.c = parse_double(val, key);
        else if (key == "hp.eps_div") r.hp.eps_div = parse_double(val, key);
        else if (key == "hp.mu") r.hp.mu = parse_double(val, key);
        else if (key == "hp.beta1") r.hp.beta1 = parse_double(val, key);
        else if (key == "hp.beta2") r.hp.beta2 = parse_double(val, key);
        else if (key == "init.mode") r.init.mode = init_mode_from_string(val);
        else if (key == "init.x0") r.init.x0 = parse_vec(val, key);
        else if (key == "init.radius") r.init.radius = parse_double(val, key);
        else if (key == "init.p0") r.init.p0 = parse_vec(val, key);
        else if (key == "init.xi0") r.init.xi0 = parse_vec(val, key);
        else if (key == "init.zeta0") r.init.zeta0 = parse_vec(val, key);
        else if (key == "run.steps") r.steps = parse_u64(val, key);
        else if (key == "run.seed") r.seed = parse_u64(val, key);
        else if (key == "run.record_stride") r.record_stride = parse_u64(val, key);
        else if (key == "run.sample_stride") r.sample_stride = parse_u64(val, key);
        else if (key == "run.noise_sigma") r.noise_sigma = parse_double(val, key);
        else if (key == "run.converge_tol") r.converge_tol = parse_double(val, key);
        else if (key == "grid.gamma") {
            spec.grid.gammas = parse_vec(val, key);
            spec.has_grid = true;
        } else if (key == "grid.dt") {
            spec.grid.dts = parse_vec(val, key);
            spec.has_grid = true;
        } else if (key == "grid.metric") {
            spec.grid.metric = grid_metric_from_string(val);
            spec.has_grid = true;
        } else if (key == "portrait.x_min") {
            spec.portrait.x_min = parse_double(val, key);
            spec.has_portrait = true;
        } else if (key == "portrait.x_max") {
            spec.portrait.x_max = parse_double(val, key);
            spec.has_portrait = true;
        } else if (key == "portrait.y_min") {
            spec.portrait.y_min = parse_double(val, key);
            spec.has_portrait = true;
        } else if (key == "portrait.y_max") {
            spec.portrait.y_max = parse_double(val, key);
            spec.has_portrait = true;
        } else if (key == "portrait.nx") {
            spec.portrait.nx = parse_u64(val, key);
            spec.has_portrait = true;
        } else if (key == "portrait.ny") {
            spec.portrait.ny = parse_u64(val, key);
            spec.has_portrait = true;
        } else if (key == "portrait.tolerance") {
            spec.portrait.tolerance = parse_double(val, key);
            spec.has_portrait = true;
        } else if (key == "ensemble.n_seeds") {
            spec.ensemble.n_seeds = parse_u64(val, key);
            spec.has_ensemble = true;
        } else if (key == "spectrum.trajectory") {
            spec.spectrum.trajectory_csv = val;
            spec.has_spectrum = true;
        } else if (key == "spectrum.direction") {
            spec.spectrum.direction = val;
            spec.has_spectrum = true;
        } else {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        }
    }
    return spec;
}

FullSpec parse_spec_string(const std::string& text) {
    std::istringstream ss(text);
    return parse_spec(ss);
}

FullSpec parse_spec_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open spec file: " + path);
    return parse_spec(f);
}

std::string serialize_spec(const FullSpec& spec) {
    const RunSpec& r = spec.run;
    std::ostringstream os;
    os << "spec.id = " << r.id << '\n';
    os << "problem.kind = " << to_string(r.problem.kind) << '\n';
    os << "problem.dim = " << r.problem.dim << '\n';
    os << "problem.min_eig = " << fmt(r.problem.min_eig) << '\n';
    os << "problem.max_eig = " << fmt(r.problem.max_eig) << '\n';
    os << "problem.rotate = " << (r.problem.rotate ? "true" : "false") << '\n';
    os << "problem.seed = " << r.problem.seed << '\n';
    os << "problem.a = " << fmt(r.problem.a) << '\n';
    os << "problem.b = " << fmt(r.problem.b) << '\n';
    os << "problem.n_examples = " << r.problem.n_examples << '\n';
    os << "problem.n_features = " << r.problem.n_features << '\n';
    os << "problem.hidden = " << r.problem.hidden << '\n';
    os << "problem.batch_size = " << r.problem.batch_size << '\n';
    os << "optimizer.kind = " << to_string(r.optimizer) << '\n';
    os << "optimizer.schedule = " << to_string(r.schedule.kind) << '\n';
    os << "optimizer.mu_max = " << fmt(r.schedule.mu_max) << '\n';
    os << "hp.dt = " << fmt(r.hp.dt) << '\n';
    os << "hp.gamma = " << fmt(r.hp.gamma) << '\n';
    os << "hp.alpha = " << fmt(r.hp.alpha) << '\n';
    os << "hp.rho = " << fmt(r.hp.rho) << '\n';
    os << "hp.c = " << fmt(r.hp.c) << '\n';
    os << "hp.eps_div = " << fmt(r.hp.eps_div) << '\n';
    os << "hp.mu = " << fmt(r.hp.mu) << '\n';
    os << "hp.beta1 = " << fmt(r.hp.beta1) << '\n';
    os << "hp.beta2 = " << fmt(r.hp.beta2) << '\n';
    os << "init.mode = " << to_string(r.init.mode) << '\n';
    if (!r.init.x0.empty()) os << "init.x0 = " << fmt(r.init.x0) << '\n';
    os << "init.radius = " << fmt(r.init.radius) << '\n';
    if (!r.init.p0.empty()) os << "init.p0 = " << fmt(r.init.p0) << '\n';
    if (!r.init.xi0.empty()) os << "init.xi0 = " << fmt(r.init.xi0) << '\n';
    if (!r.init.zeta0.empty()) os << "init.zeta0 = " << fmt(r.init.zeta0) << '\n';
    os << "run.steps = " << r.steps << '\n';
    os << "run.seed = " << r.seed << '\n';
    os << "run.record_stride = " << r.record_stride << '\n';
    os << "run.sample_stride = " << r.sample_stride << '\n';
    os << "run.noise_sigma = " << fmt(r.noise_sigma) << '\n';
    os << "run.converge_tol = " << fmt(r.converge_tol) << '\n';
    if (spec.has_grid) {
        if (!spec.grid.gammas.empty())
            os << "grid.gamma = " << fmt(spec.grid.gammas) << '\n';
        if (!spec.grid.dts.empty())
            os << "grid.dt = " << fmt(spec.grid.dts) << '\n';
        os << "grid.metric = " << to_string(spec.grid.metric) << '\n';
    }
    if (spec.has_portrait) {
        os << "portrait.x_min = " << fmt(spec.portrait.x_min) << '\n';
        os << "portrait.x_max = " << fmt(spec.portrait.x_max) << '\n';
        os << "portrait.y_min = " << fmt(spec.portrait.y_min) << '\n';
        os << "portrait.y_max = " << fmt(spec.portrait.y_max) << '\n';
        os << "portrait.nx = " << spec.portrait.nx << '\n';
        os << "portrait.ny = " << spec.portrait.ny << '\n';
        os << "portrait.tolerance = " << fmt(spec.portrait.tolerance) << '\n';
    }
    if (spec.has_ensemble)
        os << "ensemble.n_seeds = " << spec.ensemble.n_seeds << '\n';
    if (spec.has_spectrum) {
        if (!spec.spectrum.trajectory_csv.empty())
            os << "spectrum.trajectory = " << spec.spectrum.trajectory_csv << '\n';
        if (!spec.spectrum.direction.empty())
            os << "spectrum.direction = " << spec.spectrum.direction << '\n';
    }
    return os.str();
}

}  // namespace kinopt
