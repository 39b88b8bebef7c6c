#include <algorithm>
#include <cmath>
#include <limits>

#include "evidenza/error.hpp"
#include "evidenza/estimators.hpp"

namespace evidenza {

VerticalResult vertical_geometric(const TargetModel& model, double q, std::size_t levels,
                                  std::size_t m_per_level, SeededStream& stream) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("vertical_geometric: q must lie in (0,1)");
  if (levels == 0) throw DomainError("vertical_geometric: need at least one level");
  if (m_per_level < 2) throw DomainError("vertical_geometric: need at least two draws per level");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Rank of the empirical (1-q)-quantile among m ascending draws; the guard absorbs 1-q rounding.
  const double raw_rank = std::ceil((1.0 - q) * static_cast<double>(m_per_level) - 1e-9);
  const auto rank = std::clamp<std::size_t>(static_cast<std::size_t>(raw_rank), 1, m_per_level);

  VerticalResult out;
  std::vector<double> log_l(levels + 1, -kInf);
  std::vector<double> draws(m_per_level);

  for (std::size_t k = 0; k < levels; ++k) {
    double next = log_l[k];
    if (!out.plateau_level) {
      try {
        for (auto& v : draws) {
          v = model.log_likelihood(model.constrained_prior_sample(stream, log_l[k]));
        }
        std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                         draws.end());
        next = draws[rank - 1];
        if (!(next > log_l[k])) next = std::nextafter(log_l[k], kInf);
      } catch (const EmptyConstraintError&) {
        out.plateau_level = k + 1;
      } catch (const UnderflowError&) {
        out.plateau_level = k + 1;
      }
    }
    log_l[k + 1] = next;
  }

  const double log_q = std::log(q);
  std::vector<double> simple_terms(levels);
  std::vector<double> asym_terms(levels);
  for (std::size_t k = 1; k <= levels; ++k) {
    const double kq = static_cast<double>(k) * log_q;
    double log_step = -kInf;
    if (log_l[k - 1] == -kInf) {
      log_step = log_l[k];
    } else if (log_l[k] > log_l[k - 1]) {
      log_step = log_l[k] + std::log(-std::expm1(log_l[k - 1] - log_l[k]));
    }
    simple_terms[k - 1] = kq + log_step;
    asym_terms[k - 1] = kq + log_l[k];
  }

  const Budget budget{m_per_level, levels, levels};
  out.simple.estimator_id = "vertical";
  out.simple.log_Z = {log_sum_exp(simple_terms)};
  out.simple.budget = budget;
  out.simple.seed = stream.seed();
  out.simple.stream_id = stream.stream_id();

  out.asymptotic = out.simple;
  out.asymptotic.estimator_id = "vertical-asymptotic";
  out.asymptotic.log_Z = {std::log1p(-q) + log_sum_exp(asym_terms)};

  out.log_tail_bound = static_cast<double>(levels + 1) * log_q + log_l[levels];

  out.trace.reserve(levels + 1);
  for (std::size_t k = 0; k <= levels; ++k) {
    out.trace.push_back({k, std::exp(static_cast<double>(k) * log_q), log_l[k]});
  }
  return out;
}

}  // namespace evidenza
