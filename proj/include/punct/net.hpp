#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace punct {

enum class Activation { Relu, Tanh };

struct NetConfig {
  int hidden_units = 2000;
  int epochs = 100;
  double learning_rate = 0.01;
  int batch_size = 32;
  std::uint64_t seed = 0;
  Activation activation = Activation::Relu;
};

/// One-hidden-layer softmax classifier. Output width equals the number of
/// classes; class_ids is sorted and the output index is the class index.
struct TrainedNet {
  int input_dim = 0;
  Activation activation = Activation::Relu;
  Eigen::MatrixXd W1;  // hidden x input
  Eigen::VectorXd b1;  // hidden
  Eigen::MatrixXd W2;  // classes x hidden
  Eigen::VectorXd b2;  // classes
  std::vector<std::string> class_ids;
  double final_epoch_loss = 0.0;  // mean cross-entropy over the last epoch
};

struct NetGradients {
  Eigen::MatrixXd dW1;
  Eigen::VectorXd db1;
  Eigen::MatrixXd dW2;
  Eigen::VectorXd db2;
};

/// Stable softmax forward pass for one input column.
Eigen::VectorXd net_forward(const TrainedNet& net, const Eigen::VectorXd& x);

/// Mean cross-entropy over a batch; X holds one sample per column and
/// y[i] is the class index of column i.
double net_loss(const TrainedNet& net, const Eigen::MatrixXd& X,
                const std::vector<int>& y);

/// Full-batch gradient of net_loss by backpropagation.
NetGradients net_backprop(const TrainedNet& net, const Eigen::MatrixXd& X,
                          const std::vector<int>& y);

/// Minibatch SGD with seeded Xavier-uniform initialization and seeded
/// per-epoch shuffling; retraining under a fixed seed is bit-identical.
/// Throws std::invalid_argument on fewer than two classes or inconsistent
/// input lengths, and std::runtime_error when the loss turns non-finite
/// (learning rate too high).
TrainedNet net_train(
    const std::vector<std::pair<std::string, std::vector<double>>>& train,
    const NetConfig& cfg);

/// Softmax forward pass; returns the argmax class (ties to the lowest
/// index) and the full probability vector. Throws on an input length
/// mismatch.
std::pair<std::string, Eigen::VectorXd> net_predict(const TrainedNet& net,
                                                    const std::vector<double>& input);

}  // namespace punct
