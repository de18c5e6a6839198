#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "error.hpp"

namespace ffv {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long long to_ll(const std::string& key, const std::string& v) {
    long long out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        fail(errc::malformed_config, "bad integer for " + key + ": " + v);
    return out;
}

double to_f(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double out = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        fail(errc::malformed_config, "bad number for " + key + ": " + v);
    }
}

bool to_b(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    fail(errc::malformed_config, "bad flag for " + key + ": " + v);
}

} // namespace

void config_set(Config& c, const std::string& key, const std::string& v) {
    using std::function;
    static const std::map<std::string, function<void(Config&, const std::string&)>> setters = {
        {"f", [](Config& c, const std::string& v) { c.sp.f = (int)to_ll("f", v); }},
        {"u", [](Config& c, const std::string& v) { c.sp.u = (int)to_ll("u", v); }},
        {"t", [](Config& c, const std::string& v) { c.sp.t = (int)to_ll("t", v); }},
        {"r", [](Config& c, const std::string& v) { c.sp.r = (int)to_ll("r", v); }},
        {"k", [](Config& c, const std::string& v) { c.sp.k = (int)to_ll("k", v); }},
        {"chi", [](Config& c, const std::string& v) { c.sp.chi = (int)to_ll("chi", v); }},
        {"d", [](Config& c, const std::string& v) { c.sp.d = (int)to_ll("d", v); }},
        {"q", [](Config& c, const std::string& v) { c.sp.q = (u64)to_ll("q", v); }},
        {"delta_enroll", [](Config& c, const std::string& v) { c.sp.delta_enroll = to_f("delta_enroll", v); }},
        {"delta_verify", [](Config& c, const std::string& v) { c.sp.delta_verify = to_f("delta_verify", v); }},
        {"quality_min", [](Config& c, const std::string& v) { c.sp.quality_min = to_f("quality_min", v); }},
        {"rho", [](Config& c, const std::string& v) { c.sp.rho_deg = to_f("rho", v); }},
        {"epsilon", [](Config& c, const std::string& v) { c.sp.epsilon = to_f("epsilon", v); }},
        {"omega", [](Config& c, const std::string& v) { c.sp.omega_deg = to_f("omega", v); }},
        {"s_limit", [](Config& c, const std::string& v) { c.sp.s_limit = to_f("s_limit", v); }},
        {"ellipse_cx", [](Config& c, const std::string& v) { c.sp.region.cx = (int)to_ll("ellipse_cx", v); }},
        {"ellipse_cy", [](Config& c, const std::string& v) { c.sp.region.cy = (int)to_ll("ellipse_cy", v); }},
        {"ellipse_a", [](Config& c, const std::string& v) { c.sp.region.A = (int)to_ll("ellipse_a", v); }},
        {"ellipse_b", [](Config& c, const std::string& v) { c.sp.region.B = (int)to_ll("ellipse_b", v); }},
        {"frame_width", [](Config& c, const std::string& v) { c.sp.frame_w = (int)to_ll("frame_width", v); }},
        {"frame_height", [](Config& c, const std::string& v) { c.sp.frame_h = (int)to_ll("frame_height", v); }},
        {"prealign", [](Config& c, const std::string& v) { c.sp.prealign_points = to_b("prealign", v); }},
        {"prealign_threshold", [](Config& c, const std::string& v) { c.sp.prealign.threshold = (int)to_ll("prealign_threshold", v); }},
        {"prealign_downscale", [](Config& c, const std::string& v) { c.sp.prealign.downscale = (int)to_ll("prealign_downscale", v); }},
        {"prealign_cap", [](Config& c, const std::string& v) { c.sp.prealign.cap_deg = (int)to_ll("prealign_cap", v); }},
        {"chaff_budget", [](Config& c, const std::string& v) { c.sp.chaff_budget = (int)to_ll("chaff_budget", v); }},
        {"decode_budget", [](Config& c, const std::string& v) { c.sp.decode_budget = (u64)to_ll("decode_budget", v); }},
        {"mc_estimate", [](Config& c, const std::string& v) { c.sp.mc_estimate = (int)to_ll("mc_estimate", v); }},
        {"noise_jitter", [](Config& c, const std::string& v) { c.noise.jitter_radius = to_f("noise_jitter", v); }},
        {"noise_p_delete", [](Config& c, const std::string& v) { c.noise.p_delete = to_f("noise_p_delete", v); }},
        {"noise_spurious_mean", [](Config& c, const std::string& v) { c.noise.spurious_mean = to_f("noise_spurious_mean", v); }},
        {"noise_rot_max", [](Config& c, const std::string& v) { c.noise.rot_max_deg = to_f("noise_rot_max", v); }},
        {"noise_trans_max", [](Config& c, const std::string& v) { c.noise.trans_max_px = to_f("noise_trans_max", v); }},
        {"noise_q_true_min", [](Config& c, const std::string& v) { c.noise.q_true_min = to_f("noise_q_true_min", v); }},
        {"noise_q_true_max", [](Config& c, const std::string& v) { c.noise.q_true_max = to_f("noise_q_true_max", v); }},
        {"noise_q_spur_min", [](Config& c, const std::string& v) { c.noise.q_spur_min = to_f("noise_q_spur_min", v); }},
        {"noise_q_spur_max", [](Config& c, const std::string& v) { c.noise.q_spur_max = to_f("noise_q_spur_max", v); }},
        {"gen_per_finger", [](Config& c, const std::string& v) { c.gen_per_finger = (int)to_ll("gen_per_finger", v); }},
        {"gen_spacing", [](Config& c, const std::string& v) { c.gen_spacing = (int)to_ll("gen_spacing", v); }},
        {"tables_file", [](Config& c, const std::string& v) { c.tables_file = v; }},
        {"log_base", [](Config& c, const std::string& v) { c.log_base = to_f("log_base", v); }},
        {"mu", [](Config& c, const std::string& v) { c.mu_override = to_f("mu", v); }},
        {"tau", [](Config& c, const std::string& v) { c.tau_override = to_f("tau", v); }},
    };
    auto it = setters.find(key);
    if (it == setters.end()) fail(errc::malformed_config, "unknown config key: " + key);
    it->second(c, v);
}

Config parse_config(const std::string& text) {
    Config c;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(errc::malformed_config, "line " + std::to_string(lineno) + ": expected key = value");
        config_set(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    c.sp.validate();
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(errc::io_error, "cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const Config& c) {
    std::ostringstream os;
    os << "# system parameters\n";
    os << "f = " << c.sp.f << "\n";
    os << "u = " << c.sp.u << "\n";
    os << "t = " << c.sp.t << "\n";
    os << "r = " << c.sp.r << "\n";
    os << "k = " << c.sp.k << "\n";
    os << "chi = " << c.sp.chi << "\n";
    os << "d = " << c.sp.d << "\n";
    os << "q = " << c.sp.q << "\n";
    os << "delta_enroll = " << c.sp.delta_enroll << "\n";
    os << "delta_verify = " << c.sp.delta_verify << "\n";
    os << "quality_min = " << c.sp.quality_min << "\n";
    os << "rho = " << c.sp.rho_deg << "\n";
    os << "# matcher\n";
    os << "epsilon = " << c.sp.epsilon << "\n";
    os << "omega = " << c.sp.omega_deg << "\n";
    os << "s_limit = " << c.sp.s_limit << "\n";
    os << "# capture region / frame\n";
    os << "ellipse_cx = " << c.sp.region.cx << "\n";
    os << "ellipse_cy = " << c.sp.region.cy << "\n";
    os << "ellipse_a = " << c.sp.region.A << "\n";
    os << "ellipse_b = " << c.sp.region.B << "\n";
    os << "frame_width = " << c.sp.frame_w << "\n";
    os << "frame_height = " << c.sp.frame_h << "\n";
    os << "# pre-alignment\n";
    os << "prealign = " << (c.sp.prealign_points ? "on" : "off") << "\n";
    os << "prealign_threshold = " << c.sp.prealign.threshold << "\n";
    os << "prealign_downscale = " << c.sp.prealign.downscale << "\n";
    os << "prealign_cap = " << c.sp.prealign.cap_deg << "\n";
    os << "# budgets\n";
    os << "chaff_budget = " << c.sp.chaff_budget << "\n";
    os << "decode_budget = " << c.sp.decode_budget << "\n";
    os << "mc_estimate = " << c.sp.mc_estimate << "\n";
    os << "# noise model\n";
    os << "noise_jitter = " << c.noise.jitter_radius << "\n";
    os << "noise_p_delete = " << c.noise.p_delete << "\n";
    os << "noise_spurious_mean = " << c.noise.spurious_mean << "\n";
    os << "noise_rot_max = " << c.noise.rot_max_deg << "\n";
    os << "noise_trans_max = " << c.noise.trans_max_px << "\n";
    os << "noise_q_true_min = " << c.noise.q_true_min << "\n";
    os << "noise_q_true_max = " << c.noise.q_true_max << "\n";
    os << "noise_q_spur_min = " << c.noise.q_spur_min << "\n";
    os << "noise_q_spur_max = " << c.noise.q_spur_max << "\n";
    os << "# synthetic data generation\n";
    os << "gen_per_finger = " << c.gen_per_finger << "\n";
    os << "gen_spacing = " << c.gen_spacing << "\n";
    if (!c.tables_file.empty()) os << "tables_file = " << c.tables_file << "\n";
    os << "log_base = " << c.log_base << "\n";
    if (c.mu_override > 0) os << "mu = " << c.mu_override << "\n";
    if (c.tau_override > 0) os << "tau = " << c.tau_override << "\n";
    return os.str();
}

} // namespace ffv
