#include "toxprof/scorer.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace toxprof {

namespace {

constexpr std::array<std::string_view, kDimensionCount> kDimensionNames{
    "toxicity", "severe_toxicity", "identity_attack",
    "inflammatory", "insult", "threat",
};

}  // namespace

std::string_view to_string(Dimension d) {
    return kDimensionNames[static_cast<std::size_t>(d)];
}

std::optional<Dimension> dimension_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        if (kDimensionNames[i] == name) return static_cast<Dimension>(i);
    }
    return std::nullopt;
}

double quantize_score(double value) {
    // nearbyint under the default FE_TONEAREST mode rounds ties to even
    return std::nearbyint(value * 1e6) / 1e6;
}

ScoreVector sanitize_scores(const ScoreVector& raw, std::uint64_t* clamped) {
    ScoreVector out;
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        double v = raw.values[i];
        if (!std::isfinite(v)) v = 0.0;
        if (v < 0.0 || v > 1.0) {
            v = v < 0.0 ? 0.0 : 1.0;
            if (clamped) ++*clamped;
        }
        out.values[i] = quantize_score(v);
    }
    return out;
}

Lexicon Lexicon::parse(std::istream& in) {
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw std::runtime_error("lexicon: top-level JSON object expected");
    Lexicon lex;
    for (const auto& [token, weights] : j.items()) {
        if (!weights.is_object()) {
            throw std::runtime_error("lexicon: weights for '" + token + "' must be an object");
        }
        ScoreVector vec;
        for (const auto& [dim_name, value] : weights.items()) {
            auto dim = dimension_from_string(dim_name);
            if (!dim) throw std::runtime_error("lexicon: unknown dimension '" + dim_name + "'");
            const double w = value.get<double>();
            if (w < 0.0 || w > 1.0) {
                throw std::runtime_error("lexicon: weight out of [0,1] for '" + token + "'");
            }
            vec[*dim] = w;
        }
        std::string lower;
        lower.reserve(token.size());
        for (char c : token) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        lex.weights[lower] = vec;
    }
    return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon file: " + path.string());
    return parse(in);
}

ScoreVector score_text_lexicon(std::string_view text, const Lexicon& lexicon) {
    std::array<double, kDimensionCount> survive;
    survive.fill(1.0);

    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        auto it = lexicon.weights.find(token);
        if (it != lexicon.weights.end()) {
            for (std::size_t i = 0; i < kDimensionCount; ++i) {
                survive[i] *= 1.0 - it->second.values[i];
            }
        }
        token.clear();
    };

    for (char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c) || c == '_' || c == '\'') {
            token.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
        }
    }
    flush();

    ScoreVector out;
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        out.values[i] = quantize_score(1.0 - survive[i]);
    }
    return out;
}

ScoreCache ScoreCache::load(const std::filesystem::path& path,
                            std::string expected_scorer_id,
                            std::uint64_t* foreign_entries) {
    ScoreCache cache(std::move(expected_scorer_id));
    std::ifstream in(path);
    if (!in) return cache;

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) continue;
        if (j.value("scorer", std::string{}) != cache.scorer_id_) {
            if (foreign_entries) ++*foreign_entries;
            continue;
        }
        auto id_it = j.find("tweet_id");
        auto sc_it = j.find("scores");
        if (id_it == j.end() || sc_it == j.end() || !sc_it->is_object()) continue;
        ScoreVector vec;
        bool complete = true;
        for (Dimension d : kAllDimensions) {
            auto v = sc_it->find(std::string(to_string(d)));
            if (v == sc_it->end()) {
                complete = false;
                break;
            }
            vec[d] = v->get<double>();
        }
        if (complete) cache.entries_[id_it->get<std::string>()] = vec;
    }
    return cache;
}

std::optional<ScoreVector> ScoreCache::lookup(const std::string& tweet_id) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(tweet_id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ScoreCache::insert(const std::string& tweet_id, const ScoreVector& scores) {
    std::lock_guard lock(mutex_);
    entries_.emplace(tweet_id, scores);
}

void ScoreCache::save(const std::filesystem::path& path) const {
    std::lock_guard lock(mutex_);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write score cache: " + path.string());
    // Hand-formatted so scores carry exactly six decimal digits.
    char buf[32];
    for (const auto& [tweet_id, vec] : entries_) {
        out << "{\"tweet_id\": " << nlohmann::json(tweet_id).dump() << ", \"scores\": {";
        bool first = true;
        for (Dimension d : kAllDimensions) {
            std::snprintf(buf, sizeof(buf), "%.6f", vec[d]);
            if (!first) out << ", ";
            out << '"' << to_string(d) << "\": " << buf;
            first = false;
        }
        out << "}, \"scorer\": " << nlohmann::json(scorer_id_).dump() << "}\n";
    }
}

std::size_t ScoreCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

ScoreMap score_corpus(const Corpus& corpus, const TweetFilter& filter,
                      const ScoringFn& scorer, ScoreCache& cache,
                      std::vector<ScoreFailure>* failures, ScoreRunStats* stats) {
    ScoreMap out;
    ScoreRunStats local;
    for (const auto& [profile_id, records] : corpus.profiles) {
        for (const TweetRecord& r : records) {
            if (!filter.matches(r)) continue;
            ++local.eligible;
            if (auto cached = cache.lookup(r.tweet_id)) {
                ++local.cache_hits;
                out[r.tweet_id] = *cached;
                continue;
            }
            ++local.scorer_calls;
            try {
                const ScoreVector scored = sanitize_scores(scorer(r), &local.clamped);
                cache.insert(r.tweet_id, scored);
                out[r.tweet_id] = scored;
            } catch (const std::exception& e) {
                ++local.failures;
                if (failures) failures->push_back({r.tweet_id, e.what()});
            }
        }
    }
    if (stats) *stats = local;
    return out;
}

}  // namespace toxprof
