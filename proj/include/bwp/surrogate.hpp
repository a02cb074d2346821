#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bwp/analysis.hpp"
#include "bwp/common.hpp"

namespace bwp {

/// Fully-connected rectifier network (x, y, W, L) -> (g_i, g_p) with
/// input/output standardization folded into the model.
struct MlpModel {
    std::vector<int> layers;                 // e.g. {4, 30, 30, 2}
    std::vector<std::vector<double>> weights;  // layer l: layers[l+1] x layers[l], row-major
    std::vector<std::vector<double>> biases;
    std::vector<double> in_mean, in_std, out_mean, out_std;

    void validate() const {
        if (layers.size() < 2) throw std::invalid_argument("mlp needs at least two layers");
        if (weights.size() != layers.size() - 1 || biases.size() != layers.size() - 1)
            throw std::invalid_argument("mlp weight/bias layer count mismatch");
        for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
            if (layers[l] < 1 || layers[l + 1] < 1) throw std::invalid_argument("mlp layer sizes must be positive");
            if (weights[l].size() != static_cast<std::size_t>(layers[l]) * layers[l + 1])
                throw std::invalid_argument("mlp weight shape mismatch");
            if (biases[l].size() != static_cast<std::size_t>(layers[l + 1]))
                throw std::invalid_argument("mlp bias shape mismatch");
        }
        const std::size_t ni = layers.front(), no = layers.back();
        if (in_mean.size() != ni || in_std.size() != ni || out_mean.size() != no || out_std.size() != no)
            throw std::invalid_argument("mlp normalization shape mismatch");
        for (double v : in_std)
            if (!(v > 0.0)) throw std::invalid_argument("mlp input std must be positive");
        for (double v : out_std)
            if (!(v > 0.0)) throw std::invalid_argument("mlp output std must be positive");
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (std::size_t l = 0; l + 1 < layers.size(); ++l)
            n += weights[l].size() + biases[l].size();
        return n;
    }
};

namespace detail {

class TrainRng {
  public:
    explicit TrainRng(std::uint64_t seed) : gen_(splitmix64(seed)) {}
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform_pm(double a) { return (2.0 * uniform() - 1.0) * a; }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

  private:
    std::mt19937_64 gen_;
};

// Forward pass on the normalized scale; keeps pre-activations for backprop.
inline void mlp_forward_normalized(const MlpModel& m, const std::vector<double>& xin,
                                   std::vector<std::vector<double>>& acts) {
    acts.assign(m.layers.size(), {});
    acts[0] = xin;
    for (std::size_t l = 0; l + 1 < m.layers.size(); ++l) {
        const int nin = m.layers[l], nout = m.layers[l + 1];
        acts[l + 1].assign(nout, 0.0);
        const bool hidden = l + 2 < m.layers.size();
        for (int o = 0; o < nout; ++o) {
            double z = m.biases[l][o];
            const double* wrow = &m.weights[l][static_cast<std::size_t>(o) * nin];
            for (int i = 0; i < nin; ++i) z += wrow[i] * acts[l][i];
            acts[l + 1][o] = hidden ? std::max(0.0, z) : z;  // rectifier on hidden layers only
        }
    }
}

}  // namespace detail

/// Denormalized prediction.
inline std::vector<double> forward(const MlpModel& m, const std::vector<double>& x) {
    m.validate();
    if (x.size() != static_cast<std::size_t>(m.layers.front()))
        throw std::invalid_argument("mlp input size mismatch");
    std::vector<double> xn(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xn[i] = (x[i] - m.in_mean[i]) / m.in_std[i];
    std::vector<std::vector<double>> acts;
    detail::mlp_forward_normalized(m, xn, acts);
    std::vector<double> out = acts.back();
    for (std::size_t o = 0; o < out.size(); ++o) out[o] = out[o] * m.out_std[o] + m.out_mean[o];
    return out;
}

struct Dataset {
    std::vector<std::array<double, 4>> inputs;   // UE x, UE y, room width, room length
    std::vector<std::array<double, 2>> targets;  // g_i, g_p
};

inline void append_grid(Dataset& d, const RoomSpec& spec, const GridMap& grid) {
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const Point2D p = grid.center(i, j);
            d.inputs.push_back({p.x, p.y, spec.width, spec.length});
            d.targets.push_back({grid.at(i, j).g_i, grid.at(i, j).g_p});
        }
    }
}

/// Labels from the quadrature evaluator over the room set.
inline Dataset generate_dataset(const SweepSpec& spec, const Scenario& s, double cell = 0.5,
                                const QuadratureConfig& quad = {}, const EvalModels& models = {},
                                unsigned threads = 1) {
    spec.validate();
    Dataset d;
    for (double area : spec.areas_m2) {
        for (double ar : spec.aspect_ratios) {
            const RoomSpec room = RoomSpec::from_area_ar(area, ar);
            append_grid(d, room, room_grid_eval(room, s, cell, quad, models, threads));
        }
    }
    return d;
}

struct TrainConfig {
    double learning_rate = 0.03;
    int batch_size = 64;
    int epochs = 1500;
    std::uint64_t seed = 1;
    double val_split = 0.2;
    double momentum = 0.9;

    void validate() const {
        if (!(learning_rate > 0.0) || batch_size < 1 || epochs < 1)
            throw std::invalid_argument("training hyperparameters must be positive");
        if (!(val_split > 0.0 && val_split < 1.0))
            throw std::invalid_argument("validation split must lie in (0, 1)");
        if (!(momentum >= 0.0 && momentum < 1.0))
            throw std::invalid_argument("momentum must lie in [0, 1)");
    }
};

struct TrainResult {
    MlpModel model;
    std::vector<double> loss_curve;  // per-epoch training MSE (normalized scale)
    double val_rmse_g_i = 0.0;
    double val_rmse_g_p = 0.0;
};

namespace detail {

// Backprop of 0.5*|y_hat - y|^2 on the normalized scale for one sample;
// accumulates into flat gradient buffers laid out like the model.
inline double mlp_backprop(const MlpModel& m, const std::vector<double>& xn, const std::vector<double>& yn,
                           std::vector<std::vector<double>>& acts, std::vector<std::vector<double>>& gw,
                           std::vector<std::vector<double>>& gb) {
    mlp_forward_normalized(m, xn, acts);
    const std::size_t last = m.layers.size() - 1;
    std::vector<double> delta(acts[last].size());
    double loss = 0.0;
    for (std::size_t o = 0; o < delta.size(); ++o) {
        delta[o] = acts[last][o] - yn[o];
        loss += 0.5 * delta[o] * delta[o];
    }
    for (std::size_t l = last; l-- > 0;) {
        const int nin = m.layers[l], nout = m.layers[l + 1];
        std::vector<double> prev(nin, 0.0);
        for (int o = 0; o < nout; ++o) {
            // rectifier derivative: zero where the unit is inactive
            if (l + 1 < last && acts[l + 1][o] <= 0.0) continue;
            const double d = delta[o];
            gb[l][o] += d;
            double* gwrow = &gw[l][static_cast<std::size_t>(o) * nin];
            const double* wrow = &m.weights[l][static_cast<std::size_t>(o) * nin];
            for (int i = 0; i < nin; ++i) {
                gwrow[i] += d * acts[l][i];
                prev[i] += d * wrow[i];
            }
        }
        delta = std::move(prev);
    }
    return loss;
}

}  // namespace detail

/// Exposed for the finite-difference oracle: mean loss and gradients over a
/// normalized batch.
inline double loss_and_gradients(const MlpModel& m, const std::vector<std::vector<double>>& xn,
                                 const std::vector<std::vector<double>>& yn,
                                 std::vector<std::vector<double>>& gw, std::vector<std::vector<double>>& gb) {
    gw.resize(m.weights.size());
    gb.resize(m.biases.size());
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        gw[l].assign(m.weights[l].size(), 0.0);
        gb[l].assign(m.biases[l].size(), 0.0);
    }
    std::vector<std::vector<double>> acts;
    double loss = 0.0;
    for (std::size_t i = 0; i < xn.size(); ++i) loss += detail::mlp_backprop(m, xn[i], yn[i], acts, gw, gb);
    const double inv = 1.0 / xn.size();
    for (auto& g : gw)
        for (double& v : g) v *= inv;
    for (auto& g : gb)
        for (double& v : g) v *= inv;
    return loss * inv;
}

/// Mean loss only (finite-difference side of the gradient check).
inline double loss_only(const MlpModel& m, const std::vector<std::vector<double>>& xn,
                        const std::vector<std::vector<double>>& yn) {
    std::vector<std::vector<double>> acts;
    double loss = 0.0;
    for (std::size_t i = 0; i < xn.size(); ++i) {
        detail::mlp_forward_normalized(m, xn[i], acts);
        for (std::size_t o = 0; o < yn[i].size(); ++o) {
            const double d = acts.back()[o] - yn[i][o];
            loss += 0.5 * d * d;
        }
    }
    return loss / xn.size();
}

/// Fan-in-scaled uniform initialization from the seeded stream.
inline MlpModel make_mlp(const std::vector<int>& layers, std::uint64_t seed) {
    MlpModel m;
    m.layers = layers;
    detail::TrainRng rng(seed);
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        const int nin = layers[l], nout = layers[l + 1];
        const double a = std::sqrt(6.0 / nin);
        m.weights.emplace_back();
        m.weights.back().reserve(static_cast<std::size_t>(nin) * nout);
        for (int i = 0; i < nin * nout; ++i) m.weights.back().push_back(rng.uniform_pm(a));
        m.biases.emplace_back(nout, 0.0);
    }
    m.in_mean.assign(layers.front(), 0.0);
    m.in_std.assign(layers.front(), 1.0);
    m.out_mean.assign(layers.back(), 0.0);
    m.out_std.assign(layers.back(), 1.0);
    return m;
}

/// Mini-batch gradient descent with momentum on mean-squared error.
/// Deterministic given the seed: init, split, and shuffles all derive from
/// one stream. Learning rate follows a fixed schedule (halved at 60% and
/// 80% of the epoch budget). Throws numerical_error on divergence.
inline TrainResult train(const std::vector<int>& layers, const Dataset& data, const TrainConfig& cfg) {
    cfg.validate();
    if (data.inputs.empty() || data.inputs.size() != data.targets.size())
        throw std::invalid_argument("training requires a non-empty dataset");
    if (layers.front() != 4 || layers.back() != 2)
        throw std::invalid_argument("dataset is 4-input / 2-output");

    const std::size_t n = data.inputs.size();
    detail::TrainRng rng(cfg.seed);
    MlpModel m = make_mlp(layers, splitmix64(cfg.seed ^ 0x5eedULL));

    // Seeded shuffle, then split off the validation tail.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    std::size_t n_train = n == 1 ? 1 : std::max<std::size_t>(1, static_cast<std::size_t>(n * (1.0 - cfg.val_split)));
    const std::size_t n_val = n - n_train;

    // Standardization constants from the training split only.
    for (int c = 0; c < 4; ++c) {
        double mean = 0.0, var = 0.0;
        for (std::size_t i = 0; i < n_train; ++i) mean += data.inputs[order[i]][c];
        mean /= n_train;
        for (std::size_t i = 0; i < n_train; ++i) {
            const double d = data.inputs[order[i]][c] - mean;
            var += d * d;
        }
        m.in_mean[c] = mean;
        const double sd = std::sqrt(var / n_train);
        m.in_std[c] = sd > 1e-12 ? sd : 1.0;  // constant column: leave unscaled
    }
    for (int c = 0; c < 2; ++c) {
        double mean = 0.0, var = 0.0;
        for (std::size_t i = 0; i < n_train; ++i) mean += data.targets[order[i]][c];
        mean /= n_train;
        for (std::size_t i = 0; i < n_train; ++i) {
            const double d = data.targets[order[i]][c] - mean;
            var += d * d;
        }
        m.out_mean[c] = mean;
        const double sd = std::sqrt(var / n_train);
        m.out_std[c] = sd > 1e-12 ? sd : 1.0;
    }

    auto normalize = [&](std::size_t idx, std::vector<double>& xn, std::vector<double>& yn) {
        xn.resize(4);
        yn.resize(2);
        for (int c = 0; c < 4; ++c) xn[c] = (data.inputs[idx][c] - m.in_mean[c]) / m.in_std[c];
        for (int c = 0; c < 2; ++c) yn[c] = (data.targets[idx][c] - m.out_mean[c]) / m.out_std[c];
    };

    std::vector<std::vector<double>> vel_w(m.weights.size()), vel_b(m.biases.size());
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        vel_w[l].assign(m.weights[l].size(), 0.0);
        vel_b[l].assign(m.biases[l].size(), 0.0);
    }
    std::vector<std::vector<double>> gw, gb, acts;
    std::vector<double> xn, yn;
    std::vector<std::size_t> train_idx(order.begin(), order.begin() + n_train);

    TrainResult result;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double lr = cfg.learning_rate;
        if (epoch >= cfg.epochs * 4 / 5)
            lr *= 0.25;
        else if (epoch >= cfg.epochs * 3 / 5)
            lr *= 0.5;
        for (std::size_t i = n_train; i > 1; --i) std::swap(train_idx[i - 1], train_idx[rng.index(i)]);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n_train; start += cfg.batch_size) {
            const std::size_t stop = std::min(n_train, start + cfg.batch_size);
            gw.resize(m.weights.size());
            gb.resize(m.biases.size());
            for (std::size_t l = 0; l < m.weights.size(); ++l) {
                gw[l].assign(m.weights[l].size(), 0.0);
                gb[l].assign(m.biases[l].size(), 0.0);
            }
            double batch_loss = 0.0;
            for (std::size_t i = start; i < stop; ++i) {
                normalize(train_idx[i], xn, yn);
                batch_loss += detail::mlp_backprop(m, xn, yn, acts, gw, gb);
            }
            const double inv = 1.0 / (stop - start);
            epoch_loss += batch_loss;
            for (std::size_t l = 0; l < m.weights.size(); ++l) {
                for (std::size_t i = 0; i < m.weights[l].size(); ++i) {
                    vel_w[l][i] = cfg.momentum * vel_w[l][i] - lr * gw[l][i] * inv;
                    m.weights[l][i] += vel_w[l][i];
                }
                for (std::size_t i = 0; i < m.biases[l].size(); ++i) {
                    vel_b[l][i] = cfg.momentum * vel_b[l][i] - lr * gb[l][i] * inv;
                    m.biases[l][i] += vel_b[l][i];
                }
            }
        }
        epoch_loss /= n_train;
        if (!std::isfinite(epoch_loss))
            throw numerical_error("training diverged (loss is not finite) at epoch " + std::to_string(epoch));
        result.loss_curve.push_back(epoch_loss);
    }

    // Validation RMSE per output, denormalized units.
    double se_i = 0.0, se_p = 0.0;
    const std::size_t n_eval = n_val > 0 ? n_val : n_train;
    const std::size_t eval_begin = n_val > 0 ? n_train : 0;
    for (std::size_t i = eval_begin; i < eval_begin + n_eval; ++i) {
        const std::size_t idx = order[i];
        const auto pred = forward(m, {data.inputs[idx][0], data.inputs[idx][1], data.inputs[idx][2],
                                      data.inputs[idx][3]});
        se_i += (pred[0] - data.targets[idx][0]) * (pred[0] - data.targets[idx][0]);
        se_p += (pred[1] - data.targets[idx][1]) * (pred[1] - data.targets[idx][1]);
    }
    result.val_rmse_g_i = std::sqrt(se_i / n_eval);
    result.val_rmse_g_p = std::sqrt(se_p / n_eval);
    result.model = std::move(m);
    return result;
}

/// Versioned text model file; decimal text at full precision so a round trip
/// reproduces bit-identical predictions.
inline void save_mlp(const MlpModel& m, std::ostream& os) {
    m.validate();
    os.precision(17);
    os << "bwp-mlp v1\n";
    os << "layers";
    for (int l : m.layers) os << ' ' << l;
    os << '\n';
    auto row = [&](const char* key, const std::vector<double>& v) {
        os << key;
        for (double x : v) os << ' ' << x;
        os << '\n';
    };
    row("in_mean", m.in_mean);
    row("in_std", m.in_std);
    row("out_mean", m.out_mean);
    row("out_std", m.out_std);
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        os << "weights " << l << '\n';
        const int nin = m.layers[l], nout = m.layers[l + 1];
        for (int o = 0; o < nout; ++o) {
            for (int i = 0; i < nin; ++i) os << (i ? " " : "") << m.weights[l][static_cast<std::size_t>(o) * nin + i];
            os << '\n';
        }
        os << "biases " << l << '\n';
        for (int o = 0; o < nout; ++o) os << (o ? " " : "") << m.biases[l][o];
        os << '\n';
    }
}

inline void save_mlp(const MlpModel& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw input_error("cannot open model file for writing: " + path);
    save_mlp(m, f);
}

inline MlpModel load_mlp(std::istream& is) {
    std::string line;
    int line_no = 0;
    auto next_line = [&]() {
        if (!std::getline(is, line)) throw input_error("model file truncated at line " + std::to_string(line_no + 1));
        ++line_no;
        return line;
    };
    if (next_line() != "bwp-mlp v1") throw input_error("model file line 1: expected header 'bwp-mlp v1'");
    MlpModel m;
    {
        std::istringstream ls(next_line());
        std::string key;
        ls >> key;
        if (key != "layers") throw input_error("model file line 2: expected 'layers'");
        int v;
        while (ls >> v) m.layers.push_back(v);
        if (m.layers.size() < 2) throw input_error("model file line 2: need at least two layer sizes");
    }
    auto read_row = [&](const std::string& want, std::size_t n) {
        std::istringstream ls(next_line());
        std::string key;
        ls >> key;
        if (key != want)
            throw input_error("model file line " + std::to_string(line_no) + ": expected '" + want + "'");
        std::vector<double> v(n);
        for (auto& x : v)
            if (!(ls >> x))
                throw input_error("model file line " + std::to_string(line_no) + ": short row for '" + want + "'");
        return v;
    };
    m.in_mean = read_row("in_mean", m.layers.front());
    m.in_std = read_row("in_std", m.layers.front());
    m.out_mean = read_row("out_mean", m.layers.back());
    m.out_std = read_row("out_std", m.layers.back());
    for (std::size_t l = 0; l + 1 < m.layers.size(); ++l) {
        const int nin = m.layers[l], nout = m.layers[l + 1];
        std::istringstream hdr(next_line());
        std::string key;
        std::size_t idx;
        hdr >> key >> idx;
        if (key != "weights" || idx != l)
            throw input_error("model file line " + std::to_string(line_no) + ": expected 'weights " +
                              std::to_string(l) + "'");
        m.weights.emplace_back();
        m.weights.back().reserve(static_cast<std::size_t>(nin) * nout);
        for (int o = 0; o < nout; ++o) {
            std::istringstream ls(next_line());
            double x;
            for (int i = 0; i < nin; ++i) {
                if (!(ls >> x))
                    throw input_error("model file line " + std::to_string(line_no) + ": short weight row");
                m.weights.back().push_back(x);
            }
        }
        std::istringstream bhdr(next_line());
        bhdr >> key >> idx;
        if (key != "biases" || idx != l)
            throw input_error("model file line " + std::to_string(line_no) + ": expected 'biases " +
                              std::to_string(l) + "'");
        std::istringstream ls(next_line());
        m.biases.emplace_back();
        double x;
        for (int o = 0; o < nout; ++o) {
            if (!(ls >> x)) throw input_error("model file line " + std::to_string(line_no) + ": short bias row");
            m.biases.back().push_back(x);
        }
    }
    m.validate();
    return m;
}

inline MlpModel load_mlp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw input_error("cannot open model file: " + path);
    return load_mlp(f);
}

}  // namespace bwp
