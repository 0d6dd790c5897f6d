#ifndef TDPROBE_ANALYSIS_DECODING_HPP
#define TDPROBE_ANALYSIS_DECODING_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace tdprobe {

// Linear max-margin classifier trained by deterministic full-batch
// subgradient descent on the L2-regularized hinge objective. A logistic loss
// is available behind the flag.
struct LinearClassifierConfig {
  double lambda = 1e-3;
  int epochs = 200;
  bool logistic = false;
};

struct LinearClassifier {
  Eigen::VectorXd w;
  double b = 0.0;

  double score(const Eigen::VectorXd& x) const { return w.dot(x) + b; }
  int predict(const Eigen::VectorXd& x) const { return score(x) >= 0.0 ? 1 : -1; }
};

// Labels are +1 / -1.
LinearClassifier train_linear_classifier(const Eigen::MatrixXd& x,
                                         const Eigen::VectorXi& y,
                                         const LinearClassifierConfig& cfg = {});

struct DecodingSample {
  std::string run_id;
  Eigen::VectorXd features;
  bool label = false;  // true = bottleneck
};

struct DecodingFold {
  std::string held_out_run;
  std::vector<std::string> train_runs;
  double accuracy = 0.0;
  int n_test = 0;
};

struct DecodingResult {
  double mean_accuracy = 0.0;
  std::vector<DecodingFold> folds;
};

// Leave-one-run-out linear decoding. Each fold standardizes features with
// training statistics only; the held-out run never contributes to training.
// Throws when a training fold contains a single class.
DecodingResult decode_leave_one_run_out(const std::vector<DecodingSample>& samples,
                                        const LinearClassifierConfig& cfg = {});

}  // namespace tdprobe

#endif
