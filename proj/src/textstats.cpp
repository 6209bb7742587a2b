#include "toxprof/textstats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "toxprof/rng.hpp"

namespace toxprof {

namespace {

bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool has_vowel(std::string_view s) {
    return std::any_of(s.begin(), s.end(), is_vowel);
}

std::string strip_urls(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text.substr(i).starts_with("http://") || text.substr(i).starts_with("https://")) {
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            continue;
        }
        out.push_back(text[i]);
        ++i;
    }
    return out;
}

std::vector<std::string> whitespace_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) words.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

}  // namespace

std::set<std::string> load_stopwords(std::istream& in) {
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::string lower;
        for (char c : line) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        words.insert(std::move(lower));
    }
    return words;
}

std::set<std::string> load_stopwords_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stopword list: " + path.string());
    return load_stopwords(in);
}

std::string stem(std::string token) {
    auto undo_doubling = [](std::string& s) {
        if (s.size() >= 2 && s[s.size() - 1] == s[s.size() - 2] &&
            !is_vowel(s.back()) && s.back() != 'l' && s.back() != 's' && s.back() != 'z') {
            s.pop_back();
        }
    };

    if (token.ends_with("sses")) {
        token.resize(token.size() - 2);
        return token;
    }
    if (token.ends_with("ies") && token.size() > 3) {
        token.resize(token.size() - 3);
        token.push_back('y');
        return token;
    }
    if (token.ends_with("es") && token.size() > 3) {
        const char before = token[token.size() - 3];
        const bool soft = before == 's' || before == 'x' || before == 'z' ||
                          (token.size() > 4 && (token.ends_with("ches") || token.ends_with("shes")));
        if (soft) {
            token.resize(token.size() - 2);
            return token;
        }
    }
    if (token.ends_with("ing") && token.size() > 4 &&
        has_vowel(std::string_view(token).substr(0, token.size() - 3))) {
        token.resize(token.size() - 3);
        undo_doubling(token);
        return token;
    }
    if (token.ends_with("ed") && token.size() > 3 &&
        has_vowel(std::string_view(token).substr(0, token.size() - 2))) {
        token.resize(token.size() - 2);
        undo_doubling(token);
        return token;
    }
    if (token.ends_with("s") && !token.ends_with("ss") && token.size() > 2) {
        token.pop_back();
    }
    return token;
}

std::size_t sentence_count(std::string_view text) {
    std::size_t sentences = 0;
    bool content_pending = false;
    for (char c : text) {
        if (c == '.' || c == '!' || c == '?') {
            if (content_pending) {
                ++sentences;
                content_pending = false;
            }
            // further terminators in the same run are absorbed
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            content_pending = true;
        }
    }
    if (content_pending) ++sentences;  // the tweet ends the final sentence
    return sentences;
}

TokenizedDoc normalize(const std::string& profile_id,
                       std::span<const TweetRecord> records,
                       const TweetFilter& filter,
                       const std::set<std::string>& stopwords) {
    TokenizedDoc doc;
    doc.profile_id = profile_id;

    for (const TweetRecord& r : records) {
        if (!filter.matches(r)) continue;
        doc.sentence_count += sentence_count(r.text);

        const std::string no_urls = strip_urls(r.text);
        for (const std::string& word : whitespace_words(no_urls)) {
            ++doc.raw_word_count;
            std::string cleaned;
            cleaned.reserve(word.size());
            for (char c : word) {
                if (std::isalnum(static_cast<unsigned char>(c))) {
                    cleaned.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
                }
            }
            doc.raw_char_count += cleaned.size();
            if (cleaned.empty() || stopwords.contains(cleaned)) continue;
            doc.tokens.push_back(stem(std::move(cleaned)));
        }
    }
    return doc;
}

TopicModel lda_fit(const std::vector<TokenizedDoc>& docs, std::size_t topic_count,
                   double alpha, double beta, std::size_t iterations,
                   std::uint64_t seed,
                   const std::function<void(std::size_t, std::size_t)>& sweep_hook) {
    if (topic_count < 1) throw std::invalid_argument("lda_fit requires topic_count >= 1");
    if (docs.empty()) throw std::invalid_argument("lda_fit requires at least one document");
    for (const TokenizedDoc& d : docs) {
        if (d.tokens.empty()) {
            throw std::invalid_argument("lda_fit: empty document '" + d.profile_id + "'");
        }
    }
    if (alpha <= 0.0) alpha = 50.0 / static_cast<double>(topic_count);

    // deterministic vocabulary: sorted unique tokens
    std::map<std::string, std::size_t> vocab_index;
    for (const TokenizedDoc& d : docs) {
        for (const std::string& t : d.tokens) vocab_index.emplace(t, 0);
    }
    std::vector<std::string> vocabulary;
    vocabulary.reserve(vocab_index.size());
    for (auto& [word, idx] : vocab_index) {
        idx = vocabulary.size();
        vocabulary.push_back(word);
    }
    const std::size_t V = vocabulary.size();
    const std::size_t K = topic_count;
    const std::size_t M = docs.size();

    std::vector<std::vector<std::size_t>> doc_words(M);
    for (std::size_t m = 0; m < M; ++m) {
        doc_words[m].reserve(docs[m].tokens.size());
        for (const std::string& t : docs[m].tokens) {
            doc_words[m].push_back(vocab_index[t]);
        }
    }

    std::vector<std::vector<std::size_t>> z(M);
    std::vector<std::size_t> n_dk(M * K, 0);
    std::vector<std::size_t> n_kw(K * V, 0);
    std::vector<std::size_t> n_k(K, 0);

    Rng rng(seed);
    for (std::size_t m = 0; m < M; ++m) {
        z[m].resize(doc_words[m].size());
        for (std::size_t i = 0; i < doc_words[m].size(); ++i) {
            const std::size_t k = rng.uniform_index(K);
            z[m][i] = k;
            ++n_dk[m * K + k];
            ++n_kw[k * V + doc_words[m][i]];
            ++n_k[k];
        }
    }

    const double v_beta = static_cast<double>(V) * beta;
    std::vector<double> weights(K);
    for (std::size_t sweep = 0; sweep < iterations; ++sweep) {
        for (std::size_t m = 0; m < M; ++m) {
            for (std::size_t i = 0; i < doc_words[m].size(); ++i) {
                const std::size_t w = doc_words[m][i];
                const std::size_t old_k = z[m][i];
                --n_dk[m * K + old_k];
                --n_kw[old_k * V + w];
                --n_k[old_k];

                double total = 0.0;
                for (std::size_t k = 0; k < K; ++k) {
                    const double p = (static_cast<double>(n_dk[m * K + k]) + alpha) *
                                     (static_cast<double>(n_kw[k * V + w]) + beta) /
                                     (static_cast<double>(n_k[k]) + v_beta);
                    total += p;
                    weights[k] = total;
                }
                const double u = rng.uniform01() * total;
                std::size_t new_k = 0;
                while (new_k + 1 < K && weights[new_k] < u) ++new_k;

                z[m][i] = new_k;
                ++n_dk[m * K + new_k];
                ++n_kw[new_k * V + w];
                ++n_k[new_k];
            }
        }
        if (sweep_hook) {
            std::size_t assigned = 0;
            for (std::size_t k = 0; k < K; ++k) assigned += n_k[k];
            sweep_hook(sweep, assigned);
        }
    }

    TopicModel model;
    model.topic_count = K;
    model.vocabulary = std::move(vocabulary);
    model.alpha = alpha;
    model.beta = beta;
    model.seed = seed;
    model.iterations = iterations;

    model.topic_word.assign(K, std::vector<double>(V, 0.0));
    for (std::size_t k = 0; k < K; ++k) {
        const double denom = static_cast<double>(n_k[k]) + v_beta;
        for (std::size_t w = 0; w < V; ++w) {
            model.topic_word[k][w] = (static_cast<double>(n_kw[k * V + w]) + beta) / denom;
        }
    }
    model.doc_topic.assign(M, std::vector<double>(K, 0.0));
    for (std::size_t m = 0; m < M; ++m) {
        const double denom = static_cast<double>(doc_words[m].size()) +
                             static_cast<double>(K) * alpha;
        for (std::size_t k = 0; k < K; ++k) {
            model.doc_topic[m][k] = (static_cast<double>(n_dk[m * K + k]) + alpha) / denom;
        }
    }
    return model;
}

std::vector<std::pair<std::string, double>> top_words(const TopicModel& model,
                                                      std::size_t topic, std::size_t n) {
    if (topic >= model.topic_count) throw std::out_of_range("topic index out of range");
    std::vector<std::size_t> order(model.vocabulary.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto& weights = model.topic_word[topic];
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (weights[a] != weights[b]) return weights[a] > weights[b];
        return model.vocabulary[a] < model.vocabulary[b];
    });
    if (order.size() > n) order.resize(n);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(order.size());
    for (std::size_t idx : order) out.emplace_back(model.vocabulary[idx], weights[idx]);
    return out;
}

std::size_t count_syllables(std::string_view word) {
    if (word.empty()) throw std::invalid_argument("count_syllables of empty token");
    std::size_t groups = 0;
    bool in_group = false;
    for (char c : word) {
        if (is_vowel(c)) {
            if (!in_group) ++groups;
            in_group = true;
        } else {
            in_group = false;
        }
    }
    // lone silent trailing 'e', but consonant+"le" keeps its syllable
    const std::size_t n = word.size();
    if (n >= 2 && word[n - 1] == 'e' && !is_vowel(word[n - 2])) {
        const bool le_ending = word[n - 2] == 'l' && n >= 3 && !is_vowel(word[n - 3]);
        if (!le_ending && groups > 0) --groups;
    }
    return groups == 0 ? 1 : groups;
}

ReadabilityScores readability(std::span<const TweetRecord> records,
                              const TweetFilter& filter) {
    std::size_t sentences = 0;
    std::size_t words = 0;
    std::size_t chars = 0;
    std::size_t syllables = 0;
    std::set<std::string> unique_words;

    for (const TweetRecord& r : records) {
        if (!filter.matches(r)) continue;
        sentences += sentence_count(r.text);
        const std::string no_urls = strip_urls(r.text);
        for (const std::string& word : whitespace_words(no_urls)) {
            std::string letters;
            std::string cleaned;
            for (char c : word) {
                const auto lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                if (std::isalpha(static_cast<unsigned char>(c))) letters.push_back(lower);
                if (std::isalnum(static_cast<unsigned char>(c))) cleaned.push_back(lower);
            }
            if (cleaned.empty()) continue;  // pure punctuation is not a word
            ++words;
            chars += cleaned.size();
            syllables += letters.empty() ? 1 : count_syllables(letters);
            unique_words.insert(cleaned);
        }
    }
    if (sentences == 0 || words == 0) {
        throw std::invalid_argument("readability requires at least one sentence and word");
    }

    const double w = static_cast<double>(words);
    const double avg_word_len = static_cast<double>(chars) / w;
    const double avg_sentence_len = w / static_cast<double>(sentences);

    ReadabilityScores out;
    out.sentences = sentences;
    out.words = words;
    out.richness = static_cast<double>(unique_words.size()) / w;
    out.ari = 4.71 * avg_word_len + 0.5 * avg_sentence_len - 21.43;
    out.flesch = 206.835 - 1.015 * avg_sentence_len -
                 84.6 * (static_cast<double>(syllables) / w);
    return out;
}

ReadabilityReport readability_report(const std::set<std::string>& group,
                                     const Corpus& corpus, const TweetFilter& filter) {
    ReadabilityReport report;
    double sum_sentences = 0, sum_richness = 0, sum_flesch = 0, sum_ari = 0;
    for (const std::string& profile_id : group) {
        auto it = corpus.profiles.find(profile_id);
        if (it == corpus.profiles.end()) continue;
        ReadabilityScores scores;
        try {
            scores = readability(it->second, filter);
        } catch (const std::invalid_argument&) {
            continue;  // profile without usable text
        }
        ++report.n_profiles;
        sum_sentences += static_cast<double>(scores.sentences);
        sum_richness += scores.richness;
        sum_flesch += scores.flesch;
        sum_ari += scores.ari;
    }
    if (report.n_profiles > 0) {
        const double n = static_cast<double>(report.n_profiles);
        report.avg_sentences = sum_sentences / n;
        report.avg_richness = sum_richness / n;
        report.avg_flesch = sum_flesch / n;
        report.avg_ari = sum_ari / n;
    }
    return report;
}

}  // namespace toxprof
