#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvtwin/rng.hpp"

namespace pvtwin {

// Per-column min-max scaler fitted on training data only. Constant columns
// map to 0 so they carry no signal instead of blowing up.
class MinMaxNormalizer {
public:
    void fit(const std::vector<std::vector<double>>& rows);
    void fit_scalar(const std::vector<double>& values);

    std::vector<double> transform(const std::vector<double>& row) const;
    double transform_scalar(double value) const;
    double inverse_scalar(double value) const;

    const std::vector<double>& lo() const { return lo_; }
    const std::vector<double>& hi() const { return hi_; }
    bool fitted() const { return !lo_.empty(); }

private:
    std::vector<double> lo_, hi_;
};

struct NetworkConfig {
    int inputs = 10;
    int hidden = 12;          // width of both hidden layers
    double dropout = 0.2;     // applied after each hidden activation, training only
    double leaky_slope = 0.01;

    int epochs = 50;
    int batch_size = 5000;
    double val_fraction = 0.15;  // train/validation split inside the training set

    double lr_initial = 0.1;
    double lr_factor = 0.1;
    int lr_patience = 5;
    double lr_rel_threshold = 1e-4;  // relative improvement below this counts as stagnant
    double lr_reset_floor = 1e-7;    // dropping to or below this resets the rate
    double lr_reset_value = 0.01;

    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
};

// Learning-rate controller: after `patience` consecutive epochs without a
// significant relative improvement of the validation loss, the rate is
// multiplied by `factor`; a reduction to or below the floor resets it to the
// configured restart value instead.
class PlateauScheduler {
public:
    PlateauScheduler(double lr, double factor, int patience, double rel_threshold,
                     double reset_floor, double reset_value);

    // call once per epoch with the validation loss; returns the rate to use next
    double feed(double val_loss);
    double lr() const { return lr_; }

private:
    double lr_, factor_;
    int patience_, stagnant_ = 0;
    double rel_threshold_, reset_floor_, reset_value_;
    double best_ = 0.0;
    bool seen_ = false;
};

// Feedforward regressor: inputs -> hidden (sigmoid) -> hidden (leaky ReLU)
// -> 1 linear output. Weights live in flat row-major arrays.
class Network {
public:
    explicit Network(const NetworkConfig& cfg);

    void init_weights(RngStream& rng);  // He-scaled normal draws, zero biases

    // inference (no dropout)
    double predict(const std::vector<double>& x) const;

    // Mean squared error and parameter gradients over a batch; dropout masks
    // are drawn from `rng` when training is true. Gradient layout matches
    // params(). Exposed at this granularity so finite-difference checks can
    // exercise exactly the code path the optimizer sees.
    double loss_and_gradients(const std::vector<std::vector<double>>& x,
                              const std::vector<double>& y,
                              const std::vector<std::size_t>& batch, bool training,
                              RngStream& rng, std::vector<double>& grad) const;

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    const NetworkConfig& config() const { return cfg_; }

    std::string to_json(const MinMaxNormalizer& input_norm,
                        const MinMaxNormalizer& target_norm) const;
    static Network from_json(const std::string& text, MinMaxNormalizer& input_norm,
                             MinMaxNormalizer& target_norm);

private:
    NetworkConfig cfg_;
    std::vector<double> params_;  // W1, b1, W2, b2, W3, b3 in one block

    friend struct NetworkLayout;
};

struct TrainReport {
    std::vector<double> train_loss;  // per epoch, normalized units
    std::vector<double> val_loss;
    std::vector<double> lr_history;
    bool aborted_non_finite = false;
};

// Adam training with mini-batches, seeded shuffling and dropout, and the
// plateau scheduler above. Inputs and targets must already be normalized.
TrainReport train_network(Network& net, const std::vector<std::vector<double>>& x,
                          const std::vector<double>& y, std::uint64_t seed);

struct RegressionMetrics {
    double rmse = 0.0;
    double r2 = 0.0;
    bool r2_defined = true;  // false when the target is constant
    double mape = 0.0;       // mean absolute percentage error over nonzero targets
    double meape = 0.0;      // median absolute percentage error
    std::size_t ape_excluded_zeros = 0;
    std::size_t count = 0;
};

RegressionMetrics compute_metrics(const std::vector<double>& y_true,
                                  const std::vector<double>& y_pred);

struct FoldResult {
    RegressionMetrics test;
    TrainReport report;
};

struct CvReport {
    std::vector<FoldResult> folds;
    double mean_test_r2 = 0.0;
    double mean_test_rmse = 0.0;
};

// 5-fold cross validation: disjoint shuffled test folds, per-fold
// normalization fitted on the training split only, metrics in original
// units. Folds run independently with derived seeds.
CvReport kfold_cv(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                  const NetworkConfig& cfg, std::uint64_t seed, int k = 5);

}  // namespace pvtwin
