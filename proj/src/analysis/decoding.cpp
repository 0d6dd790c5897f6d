#include "tdprobe/analysis/decoding.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tdprobe/errors.hpp"

namespace tdprobe {

LinearClassifier train_linear_classifier(const Eigen::MatrixXd& x,
                                         const Eigen::VectorXi& y,
                                         const LinearClassifierConfig& cfg) {
  const Eigen::Index n = x.rows();
  if (n < 2 || y.size() != n)
    throw ConfigError("classifier: need aligned samples and labels");
  bool has_pos = false, has_neg = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) == 1) has_pos = true;
    else if (y(i) == -1) has_neg = true;
    else throw ConfigError("classifier: labels must be +1/-1");
  }
  if (!has_pos || !has_neg)
    throw ConfigError("classifier: training data contains a single class");

  LinearClassifier clf;
  clf.w = Eigen::VectorXd::Zero(x.cols());
  clf.b = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double radius = 1.0 / std::sqrt(cfg.lambda);

  for (int t = 1; t <= cfg.epochs; ++t) {
    Eigen::VectorXd gw = cfg.lambda * clf.w;
    double gb = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double margin = y(i) * (clf.w.dot(x.row(i)) + clf.b);
      if (cfg.logistic) {
        double s = 1.0 / (1.0 + std::exp(margin));
        gw -= inv_n * s * y(i) * x.row(i).transpose();
        gb -= inv_n * s * y(i);
      } else if (margin < 1.0) {
        gw -= inv_n * y(i) * x.row(i).transpose();
        gb -= inv_n * y(i);
      }
    }
    double eta = 1.0 / (cfg.lambda * static_cast<double>(t));
    clf.w -= eta * gw;
    clf.b -= eta * gb;
    // Pegasos-style projection keeps the iterates bounded.
    double norm = clf.w.norm();
    if (norm > radius) clf.w *= radius / norm;
  }
  return clf;
}

DecodingResult decode_leave_one_run_out(const std::vector<DecodingSample>& samples,
                                        const LinearClassifierConfig& cfg) {
  if (samples.empty()) throw ConfigError("decoding: no samples");

  std::vector<std::string> runs;
  for (const auto& s : samples)
    if (std::find(runs.begin(), runs.end(), s.run_id) == runs.end())
      runs.push_back(s.run_id);
  if (runs.size() < 2)
    throw ConfigError("decoding: leave-one-run-out needs at least two runs");

  const Eigen::Index dim = samples.front().features.size();
  DecodingResult result;
  double acc_sum = 0.0;

  for (const std::string& held : runs) {
    std::vector<const DecodingSample*> train, test;
    for (const auto& s : samples)
      (s.run_id == held ? test : train).push_back(&s);

    Eigen::MatrixXd xt(static_cast<Eigen::Index>(train.size()), dim);
    Eigen::VectorXi yt(static_cast<Eigen::Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
      xt.row(static_cast<Eigen::Index>(i)) = train[i]->features.transpose();
      yt(static_cast<Eigen::Index>(i)) = train[i]->label ? 1 : -1;
    }

    // Standardize with training statistics only.
    Eigen::RowVectorXd mean = xt.colwise().mean();
    Eigen::RowVectorXd sd =
        ((xt.rowwise() - mean).array().square().colwise().mean()).sqrt();
    for (Eigen::Index j = 0; j < sd.size(); ++j)
      if (sd(j) < 1e-12) sd(j) = 1.0;
    Eigen::MatrixXd xtn = (xt.rowwise() - mean).array().rowwise() / sd.array();

    LinearClassifier clf = train_linear_classifier(xtn, yt, cfg);

    DecodingFold fold;
    fold.held_out_run = held;
    for (const std::string& r : runs)
      if (r != held) fold.train_runs.push_back(r);
    int correct = 0;
    for (const auto* s : test) {
      Eigen::VectorXd xn =
          ((s->features.transpose() - mean).array() / sd.array()).transpose();
      int pred = clf.predict(xn);
      if (pred == (s->label ? 1 : -1)) ++correct;
    }
    fold.n_test = static_cast<int>(test.size());
    fold.accuracy =
        test.empty() ? 0.0 : static_cast<double>(correct) / test.size();
    acc_sum += fold.accuracy;
    result.folds.push_back(std::move(fold));
  }
  result.mean_accuracy = acc_sum / static_cast<double>(runs.size());
  return result;
}

}  // namespace tdprobe
