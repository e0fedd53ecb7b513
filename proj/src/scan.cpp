#include "catbell/scan.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

namespace catbell {

namespace {

void validate_axis(const AxisRange& r, const char* name) {
    if (r.steps < 2) throw std::invalid_argument(std::string(name) + ": steps must be >= 2");
    if (!(r.min < r.max)) throw std::invalid_argument(std::string(name) + ": min must be < max");
    if (!std::isfinite(r.min) || !std::isfinite(r.max)) {
        throw std::invalid_argument(std::string(name) + ": bounds must be finite");
    }
}

double axis_value(const AxisRange& r, int i) {
    return r.min + (r.max - r.min) * static_cast<double>(i) / static_cast<double>(r.steps - 1);
}

std::optional<ScanRecord> evaluate_point(double alpha, double omega, const ScanGrid& grid) {
    CatStateParams state;
    try {
        state = make_cat_state({alpha, 0.0}, {omega, 0.0}, grid.phi);
    } catch (const DegenerateStateError&) {
        return std::nullopt;
    }
    const auto& s = grid.settings;
    ScanRecord rec;
    rec.alpha = alpha;
    rec.omega = omega;
    rec.e_zw = correlator(s.z, s.w, state).value;
    rec.e_zpw = correlator(s.z_prime, s.w, state).value;
    rec.e_zwp = correlator(s.z, s.w_prime, state).value;
    rec.e_zpwp = correlator(s.z_prime, s.w_prime, state).value;
    const ChshValue c = chsh(s, state);  // throws on a Tsirelson breach
    rec.chsh = c.value;
    rec.classification = c.classification;
    return rec;
}

}  // namespace

ScanResult run_scan(const ScanGrid& grid, int workers) {
    validate_axis(grid.alpha_range, "alpha_range");
    validate_axis(grid.omega_range, "omega_range");
    if (workers < 1) workers = 1;

    const int na = grid.alpha_range.steps;
    const int no = grid.omega_range.steps;
    const int total = na * no;
    std::vector<std::optional<ScanRecord>> slots(total);

    auto work = [&](int first, int last, std::exception_ptr& error) {
        try {
            for (int idx = first; idx < last; ++idx) {
                const double alpha = axis_value(grid.alpha_range, idx / no);
                const double omega = axis_value(grid.omega_range, idx % no);
                slots[idx] = evaluate_point(alpha, omega, grid);
            }
        } catch (...) {
            error = std::current_exception();
        }
    };

    if (workers == 1 || total < 2 * workers) {
        std::exception_ptr error;
        work(0, total, error);
        if (error) std::rethrow_exception(error);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        const int chunk = (total + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            const int first = t * chunk;
            const int last = std::min(total, first + chunk);
            pool.emplace_back(work, first, last, std::ref(errors[t]));
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    ScanResult result;
    result.records.reserve(total);
    for (int idx = 0; idx < total; ++idx) {
        if (slots[idx]) {
            result.records.push_back(*slots[idx]);
        } else {
            result.skipped.emplace_back(axis_value(grid.alpha_range, idx / no),
                                        axis_value(grid.omega_range, idx % no));
        }
    }
    return result;
}

ScanSummary summarize(const std::vector<ScanRecord>& records) {
    if (records.empty()) throw EmptyScanError("cannot summarize an empty scan");
    ScanSummary s;
    s.total = records.size();
    bool have = false;
    for (const auto& r : records) {
        if (r.classification == Classification::Violating) ++s.violating;
        const double mag = std::abs(r.chsh);
        const bool better =
            !have || mag > s.max_abs_chsh ||
            (mag == s.max_abs_chsh &&
             (r.alpha < s.argmax_alpha ||
              (r.alpha == s.argmax_alpha && r.omega < s.argmax_omega)));
        if (better) {
            s.max_abs_chsh = mag;
            s.argmax_alpha = r.alpha;
            s.argmax_omega = r.omega;
            have = true;
        }
    }
    return s;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

const char* to_string(Classification c) {
    return c == Classification::Violating ? "violating" : "classical";
}

void write_scan_csv(const std::vector<ScanRecord>& records, std::ostream& out) {
    out << "alpha,omega,E_zw,E_zpw,E_zwp,E_zpwp,chsh,classification\n";
    for (const auto& r : records) {
        out << format_double(r.alpha) << ',' << format_double(r.omega) << ','
            << format_double(r.e_zw) << ',' << format_double(r.e_zpw) << ','
            << format_double(r.e_zwp) << ',' << format_double(r.e_zpwp) << ','
            << format_double(r.chsh) << ',' << to_string(r.classification) << '\n';
    }
}

nlohmann::json scan_to_json(const std::vector<ScanRecord>& records) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : records) {
        rows.push_back({{"alpha", r.alpha},
                        {"omega", r.omega},
                        {"E_zw", r.e_zw},
                        {"E_zpw", r.e_zpw},
                        {"E_zwp", r.e_zwp},
                        {"E_zpwp", r.e_zpwp},
                        {"chsh", r.chsh},
                        {"classification", to_string(r.classification)}});
    }
    return rows;
}

}  // namespace catbell
