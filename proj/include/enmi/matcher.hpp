// Localization decision: score a captured amplitude vector against
// candidate map sections and return the argmax. A degenerate joint (both
// images constant, single occupied cell) scores as the maximal 2: a
// perfectly constant pair is a perfect match in the scoring limit.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "enmi/grid.hpp"
#include "enmi/mi.hpp"

namespace enmi {

enum class ScoreMode { nmi, enmi };

/// A section of the global map offered for matching.
struct CandidateSection {
  std::string id;
  std::string meta;
  AmplitudeVector values;
};

struct CandidateScore {
  std::string id;
  double score = 0.0;
};

struct MatchResult {
  std::string best_id;
  std::size_t best_index = 0;
  std::vector<CandidateScore> scores;  // in candidate order
  ScoreMode mode = ScoreMode::nmi;
};

/// Scores every candidate and returns the one with the highest score;
/// ties break to the lowest candidate index.
inline MatchResult best_match(const AmplitudeVector& capture,
                              const std::vector<CandidateSection>& candidates, ScoreMode mode,
                              const TileGrid& grid, const NoiseSpec& spec,
                              const BinningScheme& binning) {
  if (candidates.empty()) throw std::invalid_argument("best_match: no candidates");
  if (capture.size() != grid.count())
    throw std::invalid_argument("best_match: capture length does not match grid");

  std::vector<double> sigmas;
  if (mode == ScoreMode::enmi) sigmas = tile_sigmas(grid, spec);

  MatchResult result;
  result.mode = mode;
  result.scores.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const CandidateSection& cand = candidates[i];
    if (cand.values.size() != capture.size())
      throw std::invalid_argument("best_match: candidate '" + cand.id + "' length mismatch");
    const JointHistogram hist = (mode == ScoreMode::enmi)
                                    ? joint_likelihood(capture, cand.values, sigmas, binning)
                                    : joint_standard(capture, cand.values, binning);
    const double score = try_nmi(hist).value_or(kDegenerateScore);
    result.scores.push_back(CandidateScore{cand.id, score});
    if (i == 0 || score > result.scores[result.best_index].score) result.best_index = i;
  }
  result.best_id = result.scores[result.best_index].id;
  return result;
}

}  // namespace enmi
