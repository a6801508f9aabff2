#include "tracekit/pos_tagger.hpp"

#include <cctype>
#include <unordered_set>

namespace tracekit {

namespace {

const std::unordered_set<std::string>& determiners() {
    static const std::unordered_set<std::string> words = {
        "the", "a", "an", "this", "that", "these", "those", "each", "every",
        "some", "any", "no", "all", "both", "either", "neither", "such"};
    return words;
}

const std::unordered_set<std::string>& prepositions() {
    static const std::unordered_set<std::string> words = {
        "of", "in", "on", "at", "by", "for", "with", "from", "to", "into",
        "onto", "over", "under", "between", "through", "during", "within",
        "without", "above", "below", "after", "before", "against", "among",
        "around", "toward", "towards", "upon", "per", "via", "as", "about"};
    return words;
}

const std::unordered_set<std::string>& pronouns() {
    static const std::unordered_set<std::string> words = {
        "i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us",
        "them", "its", "his", "hers", "their", "theirs", "our", "ours", "your",
        "yours", "my", "mine", "who", "whom", "whose", "which", "what",
        "itself", "himself", "herself", "themselves", "something", "anything",
        "nothing", "everything"};
    return words;
}

const std::unordered_set<std::string>& conjunctions() {
    static const std::unordered_set<std::string> words = {
        "and", "or", "but", "nor", "so", "yet", "if", "because", "although",
        "though", "while", "whereas", "unless", "since", "when", "whenever",
        "where", "wherever", "then", "than"};
    return words;
}

const std::unordered_set<std::string>& verbs() {
    static const std::unordered_set<std::string> words = {
        "be", "is", "am", "are", "was", "were", "been", "being", "have", "has",
        "had", "having", "do", "does", "did", "doing", "done", "will", "would",
        "shall", "should", "can", "could", "may", "might", "must", "get",
        "gets", "got", "make", "makes", "made", "go", "goes", "went", "gone",
        "take", "takes", "took", "taken", "come", "comes", "came", "run",
        "ran", "fail", "happen", "happens", "occur", "occurs", "become",
        "becomes", "became", "send", "sent", "receive", "return", "returns",
        "returned", "perform", "performs", "execute", "executes", "ensure",
        "ensures", "verify", "verifies", "allow", "allows", "require",
        "requires", "provide", "provides", "contain", "contains", "include",
        "includes", "see", "saw", "seen", "know", "knows", "knew", "want",
        "wants", "try", "tries", "tried", "keep", "keeps", "kept", "let",
        "lets", "begin", "begins", "began", "seem", "seems", "say", "says",
        "said", "show", "shows", "showed", "shown"};
    return words;
}

const std::unordered_set<std::string>& adverbs() {
    static const std::unordered_set<std::string> words = {
        "not", "very", "too", "also", "often", "always", "never", "now",
        "here", "there", "soon", "already", "again", "still", "just", "only",
        "quite", "rather", "almost", "perhaps", "instead", "however",
        "therefore", "otherwise", "thus"};
    return words;
}

const std::unordered_set<std::string>& adjectives() {
    static const std::unordered_set<std::string> words = {
        "new", "old", "good", "bad", "high", "low", "large", "small", "big",
        "long", "short", "fast", "slow", "safe", "main", "primary",
        "secondary", "current", "previous", "next", "first", "last", "second",
        "third", "valid", "invalid", "maximum", "minimum", "critical",
        "important", "different", "same", "several", "multiple", "single",
        "other", "own", "full", "empty", "common", "specific", "available",
        "remote", "local", "internal", "external", "manual", "automatic"};
    return words;
}

// Words that end like adverbs or verbs but are ordinary nouns.
const std::unordered_set<std::string>& noun_exceptions() {
    static const std::unordered_set<std::string> words = {
        "family", "supply", "reply", "assembly", "anomaly", "monopoly",
        "butterfly", "italy", "july", "thing", "string", "ring", "king",
        "spring", "building", "morning", "evening", "meeting", "setting",
        "warning", "feed", "seed", "speed", "breed", "bed"};
    return words;
}

bool ends_with(const std::string& word, const char* suffix) {
    const std::size_t n = std::char_traits<char>::length(suffix);
    return word.size() >= n + 2 &&
           word.compare(word.size() - n, n, suffix) == 0;
}

bool all_digits(const std::string& word) {
    for (const char c : word) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return !word.empty();
}

PosTag tag_word(const std::string& word) {
    if (all_digits(word)) return PosTag::number;
    if (determiners().count(word)) return PosTag::determiner;
    if (prepositions().count(word)) return PosTag::preposition;
    if (pronouns().count(word)) return PosTag::pronoun;
    if (conjunctions().count(word)) return PosTag::conjunction;
    if (verbs().count(word)) return PosTag::verb;
    if (adverbs().count(word)) return PosTag::adverb;
    if (adjectives().count(word)) return PosTag::adjective;
    if (noun_exceptions().count(word)) return PosTag::noun;

    // Third-person -s forms of lexicon verbs ("fails", "crashes").
    if (word.size() > 2 && word.back() == 's') {
        const std::string base = word.substr(0, word.size() - 1);
        if (verbs().count(base)) return PosTag::verb;
        if (ends_with(word, "es") && verbs().count(word.substr(0, word.size() - 2))) {
            return PosTag::verb;
        }
    }

    if (ends_with(word, "ly")) return PosTag::adverb;
    if (ends_with(word, "ing") || ends_with(word, "ed")) return PosTag::verb;
    if (ends_with(word, "ous") || ends_with(word, "ful") || ends_with(word, "ive") ||
        ends_with(word, "able") || ends_with(word, "ible") ||
        ends_with(word, "ic")) {
        return PosTag::adjective;
    }
    return PosTag::noun;  // default: unknown technical terms are nouns
}

}  // namespace

std::vector<TaggedToken> tag_tokens(const TokenList& tokens) {
    std::vector<TaggedToken> out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) out.push_back({tok, tag_word(tok)});
    return out;
}

std::vector<std::string> chunk_noun_phrases(const std::vector<TaggedToken>& tagged) {
    std::vector<std::string> phrases;
    std::size_t i = 0;
    const std::size_t n = tagged.size();
    while (i < n) {
        if (tagged[i].tag != PosTag::adjective && tagged[i].tag != PosTag::noun) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && tagged[j].tag == PosTag::adjective) ++j;
        std::size_t nouns_start = j;
        while (j < n && tagged[j].tag == PosTag::noun) ++j;
        if (j == nouns_start) {
            // Adjectives without a following noun do not form a phrase.
            i = nouns_start == i ? i + 1 : nouns_start;
            continue;
        }
        std::string phrase;
        for (std::size_t k = i; k < j; ++k) {
            if (k > i) phrase += ' ';
            phrase += tagged[k].token;
        }
        phrases.push_back(std::move(phrase));
        i = j;
    }
    return phrases;
}

std::vector<std::string> chunk_noun_phrases(const TokenList& tokens) {
    return chunk_noun_phrases(tag_tokens(tokens));
}

}  // namespace tracekit
