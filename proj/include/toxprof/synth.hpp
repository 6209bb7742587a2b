#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace toxprof {

struct SynthParams {
    std::size_t n_focus = 10;
    std::size_t n_random = 200;
    std::uint64_t seed = 42;
};

/// Writes a JSON-lines corpus with two planted populations.
///
/// Focus profiles ("focus_###") post in fixed sessions: one session per
/// timeline day slot starting at a rotating hour so day coverage is flat,
/// with inter-tweet gaps of 5/10/15/0.5 minutes and near-uniform weekday
/// activity. Their texts carry tokens the bundled lexicon weights highly in
/// every dimension, in tight pairs, so per-dimension medians clear 0.4 with
/// Gini far below 0.25. They reference few domains and hashtags.
///
/// Random profiles ("random_###") post diffusely: diurnal hours with a deep
/// early-morning trough, weekday-skewed days, mostly benign vocabulary with
/// sparse mild tokens, and diverse hashtags/URLs.
///
/// Output is byte-deterministic given params.
void write_synthetic_corpus(std::ostream& out, const SynthParams& params);

void write_synthetic_corpus_file(const std::filesystem::path& path,
                                 const SynthParams& params);

/// Tokens planted in focus tweets; the bundled lexicon must weight each of
/// them highly in all six dimensions.
const std::vector<std::string>& synth_focus_tokens();

/// Mild tokens sprinkled through random-profile tweets.
const std::vector<std::string>& synth_mild_tokens();

}  // namespace toxprof
