#ifndef FAIRPOST_METRICS_H_
#define FAIRPOST_METRICS_H_

#include <span>

namespace fairpost {

// Probability clamp applied before logs and logits.
inline constexpr double kProbClamp = 1e-6;

double clamp_prob(double s, double delta = kProbClamp);
double sigmoid(double z);
// logit of the clamped probability.
double logit(double s, double delta = kProbClamp);

// Mean binomial deviance -[y log s + (1-y) log(1-s)] with s clamped to
// [delta, 1-delta].
double log_loss(std::span<const int> y, std::span<const double> scores,
                double delta = kProbClamp);

}  // namespace fairpost

#endif  // FAIRPOST_METRICS_H_
