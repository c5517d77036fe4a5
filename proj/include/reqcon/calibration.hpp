#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

// Fits the linear investment-to-quality model from historical records and
// converts the physical-unit fit into the dimensionless (a, sigma) pair used
// by the rest of the library. This is the only module that touches physical
// units.

namespace reqcon {

struct HistoricalRecord {
    double investment;  // cumulative investment per firm (million USD)
    double quality;     // physical quality (subsystem-specific units)
};

struct CalibrationFit {
    double a_hat = 0.0;      // regression slope, quality units per million USD
    double sigma_hat = 0.0;  // residual standard deviation, quality units
    double mean_squared_residual = 0.0;  // raw mean squared residual
    double q0 = 0.0;         // anchor quality
    double i0 = 0.0;         // anchor investment
    std::size_t n_points = 0;
};

struct DimensionlessParams {
    double a = 0.0;
    double sigma = 0.0;
    double q_required = 0.0;  // physical units
    double horizon = 0.0;     // years
    double cost_rate = 0.0;   // million USD per year
};

// Maximum-likelihood fit of Q = q0 + A*(I - i0) + Sigma*xi with the intercept
// pinned at the anchor (i0, q0). The slope is the single-parameter least
// squares estimate; sigma_hat is the square root of the mean squared
// residual (the raw mean square is kept alongside as a diagnostic).
CalibrationFit fit_linear_mle(const std::vector<HistoricalRecord>& records,
                              double q0, double i0);

// a = horizon * cost_rate * a_hat / (q_required - q0),
// sigma = sigma_hat / (q_required - q0). Fails when q_required == q0.
DimensionlessParams to_dimensionless(const CalibrationFit& fit, double q_required,
                                     double horizon, double cost_rate);

/// (q - q0) / (q_required - q0): 0 at the state of the art, 1 at the requirement.
double scaled_quality(double q_physical, double q0, double q_required);

// CSV ingestion: header row "investment,quality", one record per line,
// '.' decimal separator, rows in any order. Malformed input throws
// std::invalid_argument naming the offending line.
std::vector<HistoricalRecord> read_records_csv(std::istream& in);
std::vector<HistoricalRecord> read_records_csv_file(const std::string& path);

}  // namespace reqcon
