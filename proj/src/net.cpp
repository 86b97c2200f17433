#include "punct/net.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "punct/rng.hpp"

namespace punct {

namespace {

// Column-wise stable softmax.
Eigen::MatrixXd softmax_cols(const Eigen::MatrixXd& Z) {
  Eigen::MatrixXd S(Z.rows(), Z.cols());
  for (Eigen::Index c = 0; c < Z.cols(); ++c) {
    const double zmax = Z.col(c).maxCoeff();
    Eigen::VectorXd e = (Z.col(c).array() - zmax).exp();
    S.col(c) = e / e.sum();
  }
  return S;
}

Eigen::MatrixXd activate(const Eigen::MatrixXd& Z, Activation act) {
  if (act == Activation::Relu) return Z.cwiseMax(0.0);
  return Z.array().tanh().matrix();
}

// Derivative expressed through the activation output H.
Eigen::MatrixXd activate_deriv(const Eigen::MatrixXd& H, Activation act) {
  if (act == Activation::Relu) {
    return (H.array() > 0.0).cast<double>().matrix();
  }
  return (1.0 - H.array().square()).matrix();
}

struct Forward {
  Eigen::MatrixXd H;  // hidden activations
  Eigen::MatrixXd S;  // softmax outputs
};

Forward forward_pass(const TrainedNet& net, const Eigen::MatrixXd& X) {
  Forward f;
  const Eigen::MatrixXd Z1 = (net.W1 * X).colwise() + net.b1;
  f.H = activate(Z1, net.activation);
  const Eigen::MatrixXd Z2 = (net.W2 * f.H).colwise() + net.b2;
  f.S = softmax_cols(Z2);
  return f;
}

double cross_entropy(const Eigen::MatrixXd& S, const std::vector<int>& y) {
  double loss = 0.0;
  for (Eigen::Index c = 0; c < S.cols(); ++c) {
    loss -= std::log(std::max(S(y[static_cast<std::size_t>(c)], c), 1e-300));
  }
  return loss / static_cast<double>(S.cols());
}

// Xavier-uniform fill from explicit 53-bit draws; bit-identical across
// standard libraries for a fixed engine state.
void xavier_fill(Eigen::MatrixXd& M, rng::Engine& eng) {
  const double limit = std::sqrt(6.0 / (static_cast<double>(M.rows()) +
                                        static_cast<double>(M.cols())));
  // Row-major fill order is part of the determinism contract.
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      M(r, c) = (2.0 * rng::unit(eng) - 1.0) * limit;
    }
  }
}

}  // namespace

Eigen::VectorXd net_forward(const TrainedNet& net, const Eigen::VectorXd& x) {
  if (x.size() != net.input_dim) {
    throw std::invalid_argument("net_forward: input length mismatch");
  }
  return forward_pass(net, x).S.col(0);
}

double net_loss(const TrainedNet& net, const Eigen::MatrixXd& X,
                const std::vector<int>& y) {
  if (static_cast<std::size_t>(X.cols()) != y.size()) {
    throw std::invalid_argument("net_loss: batch size mismatch");
  }
  return cross_entropy(forward_pass(net, X).S, y);
}

namespace {

NetGradients backprop_from(const TrainedNet& net, const Forward& f,
                           const Eigen::MatrixXd& X, const std::vector<int>& y) {
  const auto B = static_cast<double>(X.cols());
  Eigen::MatrixXd dZ2 = f.S;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    dZ2(y[static_cast<std::size_t>(c)], c) -= 1.0;
  }
  dZ2 /= B;

  NetGradients g;
  g.dW2 = dZ2 * f.H.transpose();
  g.db2 = dZ2.rowwise().sum();
  const Eigen::MatrixXd dH = net.W2.transpose() * dZ2;
  const Eigen::MatrixXd dZ1 =
      dH.cwiseProduct(activate_deriv(f.H, net.activation));
  g.dW1 = dZ1 * X.transpose();
  g.db1 = dZ1.rowwise().sum();
  return g;
}

}  // namespace

NetGradients net_backprop(const TrainedNet& net, const Eigen::MatrixXd& X,
                          const std::vector<int>& y) {
  if (static_cast<std::size_t>(X.cols()) != y.size()) {
    throw std::invalid_argument("net_backprop: batch size mismatch");
  }
  return backprop_from(net, forward_pass(net, X), X, y);
}

TrainedNet net_train(
    const std::vector<std::pair<std::string, std::vector<double>>>& train,
    const NetConfig& cfg) {
  if (train.empty()) throw std::invalid_argument("net_train: empty training set");
  if (cfg.hidden_units < 1) throw std::invalid_argument("net_train: hidden_units must be >= 1");
  if (cfg.learning_rate <= 0.0) throw std::invalid_argument("net_train: learning_rate must be > 0");
  if (cfg.batch_size < 1) throw std::invalid_argument("net_train: batch_size must be >= 1");
  if (cfg.epochs < 1) throw std::invalid_argument("net_train: epochs must be >= 1");

  const std::size_t dim = train.front().second.size();
  std::map<std::string, int> class_index;
  for (const auto& [class_id, x] : train) {
    if (x.size() != dim) throw std::invalid_argument("net_train: inconsistent input lengths");
    class_index.emplace(class_id, 0);
  }
  if (class_index.size() < 2) throw std::invalid_argument("net_train: need >= 2 classes");

  TrainedNet net;
  net.input_dim = static_cast<int>(dim);
  net.activation = cfg.activation;
  for (auto& [class_id, idx] : class_index) {
    idx = static_cast<int>(net.class_ids.size());
    net.class_ids.push_back(class_id);
  }
  const auto n_classes = static_cast<Eigen::Index>(net.class_ids.size());

  const auto n = train.size();
  Eigen::MatrixXd X(dim, n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(
        train[i].second.data(), static_cast<Eigen::Index>(dim));
    y[i] = class_index[train[i].first];
  }

  rng::Engine eng(cfg.seed);
  net.W1.resize(cfg.hidden_units, static_cast<Eigen::Index>(dim));
  net.W2.resize(n_classes, cfg.hidden_units);
  xavier_fill(net.W1, eng);
  xavier_fill(net.W2, eng);
  net.b1 = Eigen::VectorXd::Zero(cfg.hidden_units);
  net.b2 = Eigen::VectorXd::Zero(n_classes);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng::shuffle(order, eng);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < n; begin += cfg.batch_size) {
      const std::size_t count = std::min<std::size_t>(cfg.batch_size, n - begin);
      Eigen::MatrixXd Xb(dim, count);
      std::vector<int> yb(count);
      for (std::size_t k = 0; k < count; ++k) {
        Xb.col(static_cast<Eigen::Index>(k)) = X.col(static_cast<Eigen::Index>(order[begin + k]));
        yb[k] = y[order[begin + k]];
      }
      const Forward f = forward_pass(net, Xb);
      epoch_loss += cross_entropy(f.S, yb) * static_cast<double>(count);
      const NetGradients g = backprop_from(net, f, Xb, yb);
      net.W1 -= cfg.learning_rate * g.dW1;
      net.b1 -= cfg.learning_rate * g.db1;
      net.W2 -= cfg.learning_rate * g.dW2;
      net.b2 -= cfg.learning_rate * g.db2;
    }
    epoch_loss /= static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) {
      throw std::runtime_error("net_train: non-finite loss; lower the learning rate");
    }
    net.final_epoch_loss = epoch_loss;
  }
  return net;
}

std::pair<std::string, Eigen::VectorXd> net_predict(const TrainedNet& net,
                                                    const std::vector<double>& input) {
  if (input.size() != static_cast<std::size_t>(net.input_dim)) {
    throw std::invalid_argument("net_predict: input length mismatch");
  }
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
      input.data(), static_cast<Eigen::Index>(input.size()));
  const Eigen::VectorXd probs = net_forward(net, x);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < probs.size(); ++i) {
    if (probs(i) > probs(best)) best = i;  // strict: ties keep the lowest index
  }
  return {net.class_ids[static_cast<std::size_t>(best)], probs};
}

}  // namespace punct
