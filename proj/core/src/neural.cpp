#include "pvtwin/neural.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pvtwin/stats.hpp"

namespace pvtwin {

void MinMaxNormalizer::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("normalizer: no rows to fit");
    const std::size_t cols = rows.front().size();
    lo_.assign(cols, 0.0);
    hi_.assign(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
        double lo = rows[0][c], hi = rows[0][c];
        for (const auto& r : rows) {
            lo = std::min(lo, r[c]);
            hi = std::max(hi, r[c]);
        }
        lo_[c] = lo;
        hi_[c] = hi;
    }
}

void MinMaxNormalizer::fit_scalar(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("normalizer: no values to fit");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    lo_.assign(1, *lo);
    hi_.assign(1, *hi);
}

std::vector<double> MinMaxNormalizer::transform(const std::vector<double>& row) const {
    assert(row.size() == lo_.size());
    std::vector<double> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
        const double span = hi_[c] - lo_[c];
        out[c] = span > 0.0 ? (row[c] - lo_[c]) / span : 0.0;  // constant feature -> 0
    }
    return out;
}

double MinMaxNormalizer::transform_scalar(double value) const {
    assert(lo_.size() == 1);
    const double span = hi_[0] - lo_[0];
    return span > 0.0 ? (value - lo_[0]) / span : 0.0;
}

double MinMaxNormalizer::inverse_scalar(double value) const {
    assert(lo_.size() == 1);
    return lo_[0] + value * (hi_[0] - lo_[0]);
}

PlateauScheduler::PlateauScheduler(double lr, double factor, int patience, double rel_threshold,
                                   double reset_floor, double reset_value)
    : lr_(lr), factor_(factor), patience_(patience), rel_threshold_(rel_threshold),
      reset_floor_(reset_floor), reset_value_(reset_value) {}

double PlateauScheduler::feed(double val_loss) {
    if (!seen_) {
        best_ = val_loss;
        seen_ = true;
        return lr_;
    }
    const double denom = std::max(std::abs(best_), 1e-300);
    if ((best_ - val_loss) / denom > rel_threshold_) {
        best_ = val_loss;
        stagnant_ = 0;
        return lr_;
    }
    if (++stagnant_ >= patience_) {
        lr_ *= factor_;
        if (lr_ <= reset_floor_) lr_ = reset_value_;
        stagnant_ = 0;
    }
    return lr_;
}

// offsets of the flat parameter block
struct NetworkLayout {
    int in, h;
    std::size_t w1, b1, w2, b2, w3, b3, total;

    explicit NetworkLayout(const NetworkConfig& cfg) : in(cfg.inputs), h(cfg.hidden) {
        w1 = 0;
        b1 = w1 + static_cast<std::size_t>(h) * in;
        w2 = b1 + h;
        b2 = w2 + static_cast<std::size_t>(h) * h;
        w3 = b2 + h;
        b3 = w3 + h;
        total = b3 + 1;
    }
};

Network::Network(const NetworkConfig& cfg) : cfg_(cfg) {
    if (cfg.inputs < 1 || cfg.hidden < 1)
        throw std::invalid_argument("network: layer sizes must be positive");
    params_.assign(NetworkLayout(cfg).total, 0.0);
}

void Network::init_weights(RngStream& rng) {
    const NetworkLayout L(cfg_);
    const double s1 = std::sqrt(2.0 / L.in);
    const double s2 = std::sqrt(2.0 / L.h);
    for (std::size_t i = L.w1; i < L.b1; ++i) params_[i] = rng.normal(0.0, s1);
    for (std::size_t i = L.b1; i < L.w2; ++i) params_[i] = 0.0;
    for (std::size_t i = L.w2; i < L.b2; ++i) params_[i] = rng.normal(0.0, s2);
    for (std::size_t i = L.b2; i < L.w3; ++i) params_[i] = 0.0;
    for (std::size_t i = L.w3; i < L.b3; ++i) params_[i] = rng.normal(0.0, s2);
    params_[L.b3] = 0.0;
}

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

double Network::predict(const std::vector<double>& x) const {
    const NetworkLayout L(cfg_);
    assert(static_cast<int>(x.size()) == L.in);
    std::vector<double> a1(L.h), a2(L.h);
    for (int i = 0; i < L.h; ++i) {
        double z = params_[L.b1 + i];
        const double* w = &params_[L.w1 + static_cast<std::size_t>(i) * L.in];
        for (int j = 0; j < L.in; ++j) z += w[j] * x[j];
        a1[i] = sigmoid(z);
    }
    for (int i = 0; i < L.h; ++i) {
        double z = params_[L.b2 + i];
        const double* w = &params_[L.w2 + static_cast<std::size_t>(i) * L.h];
        for (int j = 0; j < L.h; ++j) z += w[j] * a1[j];
        a2[i] = z > 0.0 ? z : cfg_.leaky_slope * z;
    }
    double out = params_[L.b3];
    for (int i = 0; i < L.h; ++i) out += params_[L.w3 + i] * a2[i];
    return out;
}

double Network::loss_and_gradients(const std::vector<std::vector<double>>& x,
                                   const std::vector<double>& y,
                                   const std::vector<std::size_t>& batch, bool training,
                                   RngStream& rng, std::vector<double>& grad) const {
    const NetworkLayout L(cfg_);
    grad.assign(L.total, 0.0);
    if (batch.empty()) return 0.0;

    const double keep = 1.0 - (training ? cfg_.dropout : 0.0);
    const double inv_n = 1.0 / static_cast<double>(batch.size());

    std::vector<double> sig1(L.h), a1(L.h), z2(L.h), a2(L.h);
    std::vector<double> m1(L.h), m2(L.h);  // inverted dropout masks
    std::vector<double> d1(L.h), d2(L.h);
    double loss = 0.0;

    for (const std::size_t idx : batch) {
        const std::vector<double>& xi = x[idx];

        for (int i = 0; i < L.h; ++i) {
            double z = params_[L.b1 + i];
            const double* w = &params_[L.w1 + static_cast<std::size_t>(i) * L.in];
            for (int j = 0; j < L.in; ++j) z += w[j] * xi[j];
            sig1[i] = sigmoid(z);
            m1[i] = training && keep < 1.0 ? (rng.uniform() < keep ? 1.0 / keep : 0.0) : 1.0;
            a1[i] = sig1[i] * m1[i];
        }
        for (int i = 0; i < L.h; ++i) {
            double z = params_[L.b2 + i];
            const double* w = &params_[L.w2 + static_cast<std::size_t>(i) * L.h];
            for (int j = 0; j < L.h; ++j) z += w[j] * a1[j];
            z2[i] = z;
            a2[i] = z > 0.0 ? z : cfg_.leaky_slope * z;
            m2[i] = training && keep < 1.0 ? (rng.uniform() < keep ? 1.0 / keep : 0.0) : 1.0;
            a2[i] *= m2[i];
        }
        double pred = params_[L.b3];
        for (int i = 0; i < L.h; ++i) pred += params_[L.w3 + i] * a2[i];

        const double err = pred - y[idx];
        loss += err * err * inv_n;

        // backward
        const double dout = 2.0 * err * inv_n;
        grad[L.b3] += dout;
        for (int i = 0; i < L.h; ++i) {
            grad[L.w3 + i] += dout * a2[i];
            const double da2 = dout * params_[L.w3 + i] * m2[i];
            d2[i] = da2 * (z2[i] > 0.0 ? 1.0 : cfg_.leaky_slope);
        }
        for (int i = 0; i < L.h; ++i) {
            grad[L.b2 + i] += d2[i];
            double* gw = &grad[L.w2 + static_cast<std::size_t>(i) * L.h];
            for (int j = 0; j < L.h; ++j) gw[j] += d2[i] * a1[j];
        }
        for (int j = 0; j < L.h; ++j) {
            double acc = 0.0;
            for (int i = 0; i < L.h; ++i)
                acc += d2[i] * params_[L.w2 + static_cast<std::size_t>(i) * L.h + j];
            d1[j] = acc * m1[j] * sig1[j] * (1.0 - sig1[j]);
        }
        for (int i = 0; i < L.h; ++i) {
            grad[L.b1 + i] += d1[i];
            double* gw = &grad[L.w1 + static_cast<std::size_t>(i) * L.in];
            for (int j = 0; j < L.in; ++j) gw[j] += d1[i] * xi[j];
        }
    }
    return loss;
}

TrainReport train_network(Network& net, const std::vector<std::vector<double>>& x,
                          const std::vector<double>& y, std::uint64_t seed) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("train_network: ragged or empty dataset");
    const NetworkConfig& cfg = net.config();
    TrainReport report;

    // train/validation split on shuffled indices
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    RngStream split_rng(derive_seed(seed, "val-split"));
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[split_rng.uniform_index(i)]);
    std::size_t val_n = static_cast<std::size_t>(cfg.val_fraction * static_cast<double>(order.size()));
    std::vector<std::size_t> val(order.begin(), order.begin() + val_n);
    std::vector<std::size_t> train(order.begin() + val_n, order.end());
    if (train.empty()) {
        train = order;
        val = order;
    }
    if (val.empty()) val = train;  // tiny datasets validate on the training set

    const NetworkLayout L(cfg);
    std::vector<double> grad, m(L.total, 0.0), v(L.total, 0.0);
    PlateauScheduler sched(cfg.lr_initial, cfg.lr_factor, cfg.lr_patience, cfg.lr_rel_threshold,
                           cfg.lr_reset_floor, cfg.lr_reset_value);
    RngStream train_rng(derive_seed(seed, "train"));
    RngStream eval_rng(0);  // unused by the no-dropout path
    double lr = cfg.lr_initial;
    long long step = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = train.size(); i > 1; --i)
            std::swap(train[i - 1], train[train_rng.uniform_index(i)]);

        double epoch_loss = 0.0;
        std::size_t seen = 0;
        const std::size_t bs = cfg.batch_size > 0 ? static_cast<std::size_t>(cfg.batch_size)
                                                  : train.size();
        for (std::size_t off = 0; off < train.size(); off += bs) {
            const std::size_t n = std::min(bs, train.size() - off);
            const std::vector<std::size_t> batch(train.begin() + off, train.begin() + off + n);
            const double loss = net.loss_and_gradients(x, y, batch, true, train_rng, grad);
            epoch_loss += loss * static_cast<double>(n);
            seen += n;

            ++step;
            const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
            auto& p = net.params();
            for (std::size_t k = 0; k < p.size(); ++k) {
                m[k] = cfg.adam_beta1 * m[k] + (1.0 - cfg.adam_beta1) * grad[k];
                v[k] = cfg.adam_beta2 * v[k] + (1.0 - cfg.adam_beta2) * grad[k] * grad[k];
                p[k] -= lr * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + cfg.adam_eps);
            }
        }
        epoch_loss /= static_cast<double>(seen);

        const double val_loss = net.loss_and_gradients(x, y, val, false, eval_rng, grad);
        report.train_loss.push_back(epoch_loss);
        report.val_loss.push_back(val_loss);
        report.lr_history.push_back(lr);
        if (!std::isfinite(epoch_loss) || !std::isfinite(val_loss)) {
            report.aborted_non_finite = true;
            break;
        }
        lr = sched.feed(val_loss);
    }
    return report;
}

RegressionMetrics compute_metrics(const std::vector<double>& y_true,
                                  const std::vector<double>& y_pred) {
    if (y_true.size() != y_pred.size() || y_true.empty())
        throw std::invalid_argument("compute_metrics: ragged or empty input");
    RegressionMetrics out;
    out.count = y_true.size();

    double ss_res = 0.0;
    double mean_y = 0.0;
    for (const double y : y_true) mean_y += y;
    mean_y /= static_cast<double>(y_true.size());
    double ss_tot = 0.0;
    std::vector<double> apes;
    apes.reserve(y_true.size());
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double err = y_true[i] - y_pred[i];
        ss_res += err * err;
        ss_tot += (y_true[i] - mean_y) * (y_true[i] - mean_y);
        if (y_true[i] != 0.0)
            apes.push_back(std::abs(err / y_true[i]) * 100.0);
        else
            ++out.ape_excluded_zeros;
    }
    out.rmse = std::sqrt(ss_res / static_cast<double>(y_true.size()));
    if (ss_tot > 0.0) {
        out.r2 = 1.0 - ss_res / ss_tot;
    } else {
        out.r2 = 0.0;
        out.r2_defined = false;
    }
    if (!apes.empty()) {
        double s = 0.0;
        for (const double a : apes) s += a;
        out.mape = s / static_cast<double>(apes.size());
        out.meape = median(apes);
    }
    return out;
}

CvReport kfold_cv(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                  const NetworkConfig& cfg, std::uint64_t seed, int k) {
    if (x.size() != y.size() || x.size() < static_cast<std::size_t>(k))
        throw std::invalid_argument("kfold_cv: need at least k samples");
    CvReport report;

    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    RngStream shuffle_rng(derive_seed(seed, "kfold-shuffle"));
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[shuffle_rng.uniform_index(i)]);

    const std::size_t base = order.size() / k;
    const std::size_t rem = order.size() % k;
    std::size_t offset = 0;
    double r2_sum = 0.0, rmse_sum = 0.0;
    int r2_count = 0;

    for (int f = 0; f < k; ++f) {
        const std::size_t len = base + (static_cast<std::size_t>(f) < rem ? 1 : 0);
        const std::vector<std::size_t> test(order.begin() + offset, order.begin() + offset + len);
        std::vector<std::size_t> train;
        train.reserve(order.size() - len);
        train.insert(train.end(), order.begin(), order.begin() + offset);
        train.insert(train.end(), order.begin() + offset + len, order.end());
        offset += len;

        // normalization is fitted on the training split only
        std::vector<std::vector<double>> x_train_raw;
        std::vector<double> y_train_raw;
        x_train_raw.reserve(train.size());
        for (const std::size_t i : train) {
            x_train_raw.push_back(x[i]);
            y_train_raw.push_back(y[i]);
        }
        MinMaxNormalizer xnorm, ynorm;
        xnorm.fit(x_train_raw);
        ynorm.fit_scalar(y_train_raw);

        std::vector<std::vector<double>> xt;
        std::vector<double> yt;
        xt.reserve(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) {
            xt.push_back(xnorm.transform(x_train_raw[i]));
            yt.push_back(ynorm.transform_scalar(y_train_raw[i]));
        }

        Network net(cfg);
        RngStream init_rng(derive_seed(seed, "fold-init", static_cast<std::uint64_t>(f)));
        net.init_weights(init_rng);
        FoldResult fr;
        fr.report = train_network(net, xt, yt, derive_seed(seed, "fold-train", f));

        std::vector<double> y_true, y_pred;
        y_true.reserve(test.size());
        for (const std::size_t i : test) {
            y_true.push_back(y[i]);
            y_pred.push_back(ynorm.inverse_scalar(net.predict(xnorm.transform(x[i]))));
        }
        fr.test = compute_metrics(y_true, y_pred);
        if (fr.test.r2_defined) {
            r2_sum += fr.test.r2;
            ++r2_count;
        }
        rmse_sum += fr.test.rmse;
        report.folds.push_back(std::move(fr));
    }
    report.mean_test_r2 = r2_count > 0 ? r2_sum / r2_count : 0.0;
    report.mean_test_rmse = rmse_sum / static_cast<double>(k);
    return report;
}

std::string Network::to_json(const MinMaxNormalizer& input_norm,
                             const MinMaxNormalizer& target_norm) const {
    const NetworkLayout L(cfg_);
    nlohmann::ordered_json j;
    j["config"] = {{"inputs", cfg_.inputs},
                   {"hidden", cfg_.hidden},
                   {"dropout", cfg_.dropout},
                   {"leaky_slope", cfg_.leaky_slope},
                   {"epochs", cfg_.epochs},
                   {"batch_size", cfg_.batch_size},
                   {"val_fraction", cfg_.val_fraction},
                   {"lr_initial", cfg_.lr_initial},
                   {"lr_factor", cfg_.lr_factor},
                   {"lr_patience", cfg_.lr_patience},
                   {"lr_rel_threshold", cfg_.lr_rel_threshold},
                   {"lr_reset_floor", cfg_.lr_reset_floor},
                   {"lr_reset_value", cfg_.lr_reset_value},
                   {"adam_beta1", cfg_.adam_beta1},
                   {"adam_beta2", cfg_.adam_beta2},
                   {"adam_eps", cfg_.adam_eps}};
    j["input_normalizer"] = {{"lo", input_norm.lo()}, {"hi", input_norm.hi()}};
    j["target_normalizer"] = {{"lo", target_norm.lo()}, {"hi", target_norm.hi()}};
    auto slice = [&](std::size_t from, std::size_t n) {
        return std::vector<double>(params_.begin() + from, params_.begin() + from + n);
    };
    j["layers"] = nlohmann::ordered_json::array();
    j["layers"].push_back({{"rows", L.h},
                           {"cols", L.in},
                           {"activation", "sigmoid"},
                           {"weights", slice(L.w1, static_cast<std::size_t>(L.h) * L.in)},
                           {"bias", slice(L.b1, L.h)}});
    j["layers"].push_back({{"rows", L.h},
                           {"cols", L.h},
                           {"activation", "leaky_relu"},
                           {"weights", slice(L.w2, static_cast<std::size_t>(L.h) * L.h)},
                           {"bias", slice(L.b2, L.h)}});
    j["layers"].push_back({{"rows", 1},
                           {"cols", L.h},
                           {"activation", "linear"},
                           {"weights", slice(L.w3, L.h)},
                           {"bias", slice(L.b3, 1)}});
    return j.dump(2) + "\n";
}

Network Network::from_json(const std::string& text, MinMaxNormalizer& input_norm,
                           MinMaxNormalizer& target_norm) {
    const nlohmann::json j = nlohmann::json::parse(text);
    NetworkConfig cfg;
    const auto& c = j.at("config");
    cfg.inputs = c.at("inputs").get<int>();
    cfg.hidden = c.at("hidden").get<int>();
    cfg.dropout = c.at("dropout").get<double>();
    cfg.leaky_slope = c.at("leaky_slope").get<double>();
    cfg.epochs = c.at("epochs").get<int>();
    cfg.batch_size = c.at("batch_size").get<int>();
    cfg.val_fraction = c.at("val_fraction").get<double>();
    cfg.lr_initial = c.at("lr_initial").get<double>();
    cfg.lr_factor = c.at("lr_factor").get<double>();
    cfg.lr_patience = c.at("lr_patience").get<int>();
    cfg.lr_rel_threshold = c.at("lr_rel_threshold").get<double>();
    cfg.lr_reset_floor = c.at("lr_reset_floor").get<double>();
    cfg.lr_reset_value = c.at("lr_reset_value").get<double>();
    cfg.adam_beta1 = c.at("adam_beta1").get<double>();
    cfg.adam_beta2 = c.at("adam_beta2").get<double>();
    cfg.adam_eps = c.at("adam_eps").get<double>();

    Network net(cfg);
    const NetworkLayout L(cfg);
    auto put = [&](std::size_t at, const nlohmann::json& arr) {
        std::size_t i = at;
        for (const auto& v : arr) net.params_[i++] = v.get<double>();
    };
    const auto& layers = j.at("layers");
    put(L.w1, layers.at(0).at("weights"));
    put(L.b1, layers.at(0).at("bias"));
    put(L.w2, layers.at(1).at("weights"));
    put(L.b2, layers.at(1).at("bias"));
    put(L.w3, layers.at(2).at("weights"));
    put(L.b3, layers.at(2).at("bias"));

    auto load_norm = [](const nlohmann::json& nj, MinMaxNormalizer& norm) {
        std::vector<std::vector<double>> rows(2);
        rows[0] = nj.at("lo").get<std::vector<double>>();
        rows[1] = nj.at("hi").get<std::vector<double>>();
        // fit() on the two bound rows reproduces exactly the stored bounds
        norm.fit(rows);
    };
    load_norm(j.at("input_normalizer"), input_norm);
    load_norm(j.at("target_normalizer"), target_norm);
    return net;
}

}  // namespace pvtwin
