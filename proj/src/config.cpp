#include "nelson/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "nelson/errors.hpp"

namespace nelson {

Grid1D SimulationConfig::grid() const {
    Grid1D g = Grid1D::from_spacing(x_min, x_max, dx);
    if (g.n_points > n_points_cap) {
        // resolution fallback: honor the cap, coarsen the spacing
        g = Grid1D::from_extent(x_min, x_max, n_points_cap);
    }
    return g;
}

double SimulationConfig::wkb_time() const {
    return m * d / (hbar * kappa());
}

void SimulationConfig::validate() const {
    if (!(x_min < x_max)) throw ConfigError("config: x_min must be < x_max");
    if (!(dx > 0.0)) throw ConfigError("config: dx must be > 0");
    if (n_points_cap < 3) throw ConfigError("config: n_points_cap must be >= 3");
    barrier().validate();
    packet().validate();
    if (-0.5 * d < x_min || 0.5 * d > x_max)
        throw ConfigError("config: barrier does not fit inside the grid");
    if (n_paths == 0) throw ConfigError("config: n_paths must be >= 1");
    if (!(dt > 0.0)) throw ConfigError("config: dt must be > 0");
    if (tf_mode == TfMode::Fixed && !(t_f > 0.0))
        throw ConfigError("config: fixed t_f must be > 0");
    if (!(t_f_cap > 0.0)) throw ConfigError("config: t_f_cap must be > 0");
    if (!(stop_p2 > 0.0) || !(stop_undecided > 0.0))
        throw ConfigError("config: stop thresholds must be > 0");
    if (stop_check_every == 0) throw ConfigError("config: stop_check_every must be >= 1");
    if (noise_scale < 0.0) throw ConfigError("config: noise_scale must be >= 0");
}

void SimulationConfig::apply_profile(const std::string& profile) {
    if (profile == "desk") {
        dx = 0.1;
        n_paths = 10000;
    } else if (profile == "paper") {
        dx = 0.05;
        n_paths = 100000;
    } else {
        throw ConfigError("unknown profile '" + profile + "' (expected desk or paper)");
    }
}

std::string to_string(TfMode mode) { return mode == TfMode::Auto ? "auto" : "fixed"; }

std::string to_string(FitMethod method) {
    switch (method) {
        case FitMethod::LeastSquares: return "ls";
        case FitMethod::Mle: return "mle";
        default: return "both";
    }
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

TfMode parse_tf_mode(const std::string& s) {
    if (s == "auto") return TfMode::Auto;
    if (s == "fixed") return TfMode::Fixed;
    throw ConfigError("config: bad tf_mode '" + s + "'");
}

FitMethod parse_fit_method(const std::string& s) {
    if (s == "ls") return FitMethod::LeastSquares;
    if (s == "mle") return FitMethod::Mle;
    if (s == "both") return FitMethod::Both;
    throw ConfigError("config: bad fit_method '" + s + "'");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

std::string SimulationConfig::serialize() const {
    std::ostringstream os;
    os << "# simulation config; lengths in 1/k0, times in 1/k0^2, energies in hbar^2 k0^2 / m\n";
    os << "x_min = " << fmt(x_min) << "\n";
    os << "x_max = " << fmt(x_max) << "\n";
    os << "dx = " << fmt(dx) << "\n";
    os << "n_points_cap = " << n_points_cap << "\n";
    os << "v0 = " << fmt(v0) << "\n";
    os << "d = " << fmt(d) << "\n";
    os << "m = " << fmt(m) << "\n";
    os << "hbar = " << fmt(hbar) << "\n";
    os << "x_mean = " << fmt(x_mean) << "\n";
    os << "p_mean = " << fmt(p_mean) << "\n";
    os << "delta_x = " << fmt(delta_x) << "\n";
    os << "n_paths = " << n_paths << "\n";
    os << "master_seed = " << master_seed << "\n";
    os << "noise_scale = " << fmt(noise_scale) << "\n";
    os << "n_threads = " << n_threads << "\n";
    os << "dt = " << fmt(dt) << "\n";
    os << "tf_mode = " << to_string(tf_mode) << "\n";
    os << "t_f = " << fmt(t_f) << "\n";
    os << "t_f_cap = " << fmt(t_f_cap) << "\n";
    os << "stop_p2 = " << fmt(stop_p2) << "\n";
    os << "stop_undecided = " << fmt(stop_undecided) << "\n";
    os << "stop_check_every = " << stop_check_every << "\n";
    os << "histogram_bins = " << histogram_bins << "\n";
    os << "fit_method = " << to_string(fit_method) << "\n";
    os << "out_dir = " << out_dir << "\n";
    return os.str();
}

SimulationConfig SimulationConfig::parse(std::istream& in) {
    SimulationConfig c;
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config: expected key = value, got '" + line + "'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    auto num = [&](const char* key, double& out) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        try {
            std::size_t pos = 0;
            out = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError(std::string("config: bad number for ") + key + ": '" + it->second + "'");
        }
        kv.erase(it);
    };
    auto unum = [&](const char* key, std::uint64_t& out) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        try {
            out = std::stoull(it->second);
        } catch (const std::exception&) {
            throw ConfigError(std::string("config: bad integer for ") + key);
        }
        kv.erase(it);
    };

    // profile first so explicit keys can override what it sets
    if (auto it = kv.find("profile"); it != kv.end()) {
        c.apply_profile(it->second);
        kv.erase(it);
    }

    num("x_min", c.x_min);
    num("x_max", c.x_max);
    num("dx", c.dx);
    unum("n_points_cap", c.n_points_cap);
    num("v0", c.v0);
    num("d", c.d);
    num("m", c.m);
    num("hbar", c.hbar);
    num("x_mean", c.x_mean);
    num("p_mean", c.p_mean);
    num("delta_x", c.delta_x);
    unum("n_paths", c.n_paths);
    unum("master_seed", c.master_seed);
    num("noise_scale", c.noise_scale);
    num("dt", c.dt);
    num("t_f", c.t_f);
    num("t_f_cap", c.t_f_cap);
    num("stop_p2", c.stop_p2);
    num("stop_undecided", c.stop_undecided);
    unum("stop_check_every", c.stop_check_every);
    unum("histogram_bins", c.histogram_bins);

    if (auto it = kv.find("n_threads"); it != kv.end()) {
        c.n_threads = std::stoi(it->second);
        kv.erase(it);
    }
    if (auto it = kv.find("tf_mode"); it != kv.end()) {
        c.tf_mode = parse_tf_mode(it->second);
        kv.erase(it);
    }
    if (auto it = kv.find("fit_method"); it != kv.end()) {
        c.fit_method = parse_fit_method(it->second);
        kv.erase(it);
    }
    if (auto it = kv.find("out_dir"); it != kv.end()) {
        c.out_dir = it->second;
        kv.erase(it);
    }
    if (!kv.empty()) throw ConfigError("config: unknown key '" + kv.begin()->first + "'");
    return c;
}

SimulationConfig SimulationConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    return parse(in);
}

void SimulationConfig::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("config: cannot write '" + path + "'");
    out << serialize();
}

} // namespace nelson
