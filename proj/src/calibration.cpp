#include "reqcon/calibration.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <stdexcept>

namespace reqcon {

CalibrationFit fit_linear_mle(const std::vector<HistoricalRecord>& records,
                              double q0, double i0) {
    if (records.size() < 2) {
        throw std::invalid_argument("need at least 2 records to fit");
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (const HistoricalRecord& rec : records) {
        if (!std::isfinite(rec.investment) || !std::isfinite(rec.quality)) {
            throw std::invalid_argument("records must be finite");
        }
        const double x = rec.investment - i0;
        const double y = rec.quality - q0;
        sxx += x * x;
        sxy += x * y;
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("all investments identical; slope undefined");
    }

    CalibrationFit fit;
    fit.a_hat = sxy / sxx;
    fit.q0 = q0;
    fit.i0 = i0;
    fit.n_points = records.size();

    double ss_res = 0.0;
    for (const HistoricalRecord& rec : records) {
        const double residual = q0 + fit.a_hat * (rec.investment - i0) - rec.quality;
        ss_res += residual * residual;
    }
    fit.mean_squared_residual = ss_res / static_cast<double>(records.size());
    fit.sigma_hat = std::sqrt(fit.mean_squared_residual);
    return fit;
}

DimensionlessParams to_dimensionless(const CalibrationFit& fit, double q_required,
                                     double horizon, double cost_rate) {
    if (q_required == fit.q0) {
        throw std::invalid_argument(
            "q_required equals the state-of-the-art quality; scaling divides by zero");
    }
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
    if (!(cost_rate > 0.0)) throw std::invalid_argument("cost_rate must be > 0");

    const double span = q_required - fit.q0;
    DimensionlessParams params;
    params.a = horizon * cost_rate * fit.a_hat / span;
    params.sigma = fit.sigma_hat / span;
    params.q_required = q_required;
    params.horizon = horizon;
    params.cost_rate = cost_rate;
    return params;
}

double scaled_quality(double q_physical, double q0, double q_required) {
    if (q_required == q0) {
        throw std::invalid_argument(
            "q_required equals the state-of-the-art quality; scaling divides by zero");
    }
    return (q_physical - q0) / (q_required - q0);
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& field, std::size_t line_no) {
    const std::string t = trim(field);
    if (t.empty()) {
        throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                    ": empty field");
    }
    char* end = nullptr;
    const double value = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(value)) {
        throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                    ": not a finite number: '" + t + "'");
    }
    return value;
}

}  // namespace

std::vector<HistoricalRecord> read_records_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<HistoricalRecord> records;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (!header_seen) {
            if (t != "investment,quality") {
                throw std::invalid_argument(
                    "csv line " + std::to_string(line_no) +
                    ": expected header 'investment,quality', got '" + t + "'");
            }
            header_seen = true;
            continue;
        }
        const auto comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
            throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                        ": expected exactly two fields");
        }
        records.push_back(HistoricalRecord{parse_number(t.substr(0, comma), line_no),
                                           parse_number(t.substr(comma + 1), line_no)});
    }
    if (!header_seen) {
        throw std::invalid_argument("csv is empty; header 'investment,quality' required");
    }
    return records;
}

std::vector<HistoricalRecord> read_records_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open csv file: " + path);
    return read_records_csv(in);
}

}  // namespace reqcon
