#include "catbell/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace catbell {

namespace {

std::string strip_whitespace(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    }
    return out;
}

double parse_double(const std::string& text) {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters in '" + text + "'");
    return v;
}

// "a", "bi", "a+bi" / "a-bi", with "i" meaning coefficient 1.
Amplitude parse_rectangular(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    if (s.back() == 'i' || s.back() == 'I') {
        const std::string body = s.substr(0, s.size() - 1);
        // Split before the sign of the imaginary part, skipping a leading
        // sign and exponent signs.
        for (std::size_t pos = body.size(); pos-- > 1;) {
            const char c = body[pos];
            if ((c == '+' || c == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
                const std::string re = body.substr(0, pos);
                std::string im = body.substr(pos);
                if (im == "+") im = "1";
                if (im == "-") im = "-1";
                return {parse_double(re), parse_double(im)};
            }
        }
        std::string im = body;
        if (im.empty() || im == "+") im = "1";
        if (im == "-") im = "-1";
        return {0.0, parse_double(im)};
    }
    return {parse_double(s), 0.0};
}

}  // namespace

Amplitude parse_complex(const std::string& text) {
    const std::string s = strip_whitespace(text);
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    try {
        if (s.front() == '(') {
            if (s.back() != ')') throw std::invalid_argument("unbalanced parentheses");
            const std::string inner = s.substr(1, s.size() - 2);
            const auto comma = inner.find(',');
            if (comma == std::string::npos) {
                throw std::invalid_argument("pair form needs 're,im'");
            }
            return {parse_double(inner.substr(0, comma)), parse_double(inner.substr(comma + 1))};
        }
        return parse_rectangular(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse complex number from '" + text +
                                    "'; expected 'a+bi' or '(re, im)'");
    }
}

std::pair<double, double> parse_range(const std::string& text) {
    const std::string s = strip_whitespace(text);
    const auto colon = s.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("range '" + text + "' must look like 'min:max'");
    }
    double lo = 0.0, hi = 0.0;
    try {
        lo = parse_double(s.substr(0, colon));
        hi = parse_double(s.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("range '" + text + "' must look like 'min:max'");
    }
    if (!(lo < hi)) throw std::invalid_argument("range '" + text + "' needs min < max");
    return {lo, hi};
}

namespace {

nlohmann::json amplitude_json(Amplitude v) { return {{"re", v.real()}, {"im", v.imag()}}; }

Amplitude amplitude_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_complex(j.get<std::string>());
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

template <typename T>
void set_if(nlohmann::json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

}  // namespace

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["command"] = c.command;
    if (c.sigma) j["sigma"] = amplitude_json(*c.sigma);
    if (c.eta) j["eta"] = amplitude_json(*c.eta);
    set_if(j, "phi", c.phi);
    if (c.z) j["z"] = amplitude_json(*c.z);
    if (c.zp) j["zp"] = amplitude_json(*c.zp);
    if (c.w) j["w"] = amplitude_json(*c.w);
    if (c.wp) j["wp"] = amplitude_json(*c.wp);
    if (c.alpha_range) j["alpha_range"] = {c.alpha_range->first, c.alpha_range->second};
    if (c.omega_range) j["omega_range"] = {c.omega_range->first, c.omega_range->second};
    if (c.steps) j["steps"] = {c.steps->first, c.steps->second};
    set_if(j, "cutoff", c.cutoff);
    set_if(j, "samples", c.samples);
    set_if(j, "budget", c.budget);
    set_if(j, "restarts", c.restarts);
    set_if(j, "seed", c.seed);
    set_if(j, "workers", c.workers);
    set_if(j, "settings_box", c.settings_box);
    set_if(j, "out", c.out);
    set_if(j, "format", c.format);
    if (c.paper_setting) j["paper_setting"] = true;
    if (c.literal_vacuum) j["literal_f"] = true;
    return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.command = j.value("command", std::string{});
    if (j.contains("sigma")) c.sigma = amplitude_from_json(j.at("sigma"));
    if (j.contains("eta")) c.eta = amplitude_from_json(j.at("eta"));
    if (j.contains("phi")) c.phi = j.at("phi").get<double>();
    if (j.contains("z")) c.z = amplitude_from_json(j.at("z"));
    if (j.contains("zp")) c.zp = amplitude_from_json(j.at("zp"));
    if (j.contains("w")) c.w = amplitude_from_json(j.at("w"));
    if (j.contains("wp")) c.wp = amplitude_from_json(j.at("wp"));
    if (j.contains("alpha_range")) {
        const auto& r = j.at("alpha_range");
        c.alpha_range = {r.at(0).get<double>(), r.at(1).get<double>()};
    }
    if (j.contains("omega_range")) {
        const auto& r = j.at("omega_range");
        c.omega_range = {r.at(0).get<double>(), r.at(1).get<double>()};
    }
    if (j.contains("steps")) {
        const auto& s = j.at("steps");
        if (s.is_array()) {
            c.steps = {s.at(0).get<int>(), s.at(1).get<int>()};
        } else {
            c.steps = {s.get<int>(), s.get<int>()};
        }
    }
    if (j.contains("cutoff")) c.cutoff = j.at("cutoff").get<int>();
    if (j.contains("samples")) c.samples = j.at("samples").get<int>();
    if (j.contains("budget")) c.budget = j.at("budget").get<long>();
    if (j.contains("restarts")) c.restarts = j.at("restarts").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("settings_box")) c.settings_box = j.at("settings_box").get<double>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
    c.paper_setting = j.value("paper_setting", false);
    c.literal_vacuum = j.value("literal_f", false);
    return c;
}

}  // namespace catbell
