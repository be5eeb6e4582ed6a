#include "sinetune/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sinetune {
namespace {

std::string with_line(const std::string& message, std::size_t line) {
    if (line == 0) return message;
    return "line " + std::to_string(line) + ": " + message;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_token(std::string_view token) {
    if (token.empty()) return false;
    for (char c : token) {
        if (std::isspace(static_cast<unsigned char>(c))) return false;
        if (c == ':' || c == ',' || c == ';' || c == '#') return false;
    }
    return true;
}

std::vector<std::string> split_list(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(sep, start);
        if (end == std::string_view::npos) end = s.size();
        std::string_view piece = trim(s.substr(start, end - start));
        out.emplace_back(piece);
        if (end == s.size()) break;
        start = end + 1;
    }
    return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

void check_token(const std::string& token, const char* what, std::size_t line) {
    if (!valid_token(token))
        throw CorpusError(std::string("invalid ") + what + " '" + token + "'", line);
}

}  // namespace

CorpusError::CorpusError(const std::string& message, std::size_t line)
    : std::runtime_error(with_line(message, line)), line_(line) {}

SymbolId SymbolTable::intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    SymbolId id = static_cast<SymbolId>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
}

std::optional<SymbolId> SymbolTable::find(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<FactId> Corpus::fact_id(std::string_view name) const {
    auto it = fact_ids.find(std::string(name));
    if (it == fact_ids.end()) return std::nullopt;
    return it->second;
}

CorpusBuilder& CorpusBuilder::add_fact(std::string name, std::vector<std::string> symbols,
                                       std::size_t line) {
    facts_.push_back(RawFact{std::move(name), std::move(symbols), line});
    return *this;
}

CorpusBuilder& CorpusBuilder::add_conjecture(std::string name,
                                             std::vector<std::string> goal_symbols,
                                             std::vector<std::string> required,
                                             std::vector<std::string> accessible,
                                             bool explicit_accessible, std::size_t line) {
    conjectures_.push_back(RawConjecture{std::move(name), std::move(goal_symbols),
                                         std::move(required), std::move(accessible),
                                         explicit_accessible || !accessible.empty(), line});
    return *this;
}

Corpus CorpusBuilder::build() const {
    Corpus corpus;

    for (const RawFact& raw : facts_) {
        check_token(raw.name, "fact name", raw.line);
        if (corpus.fact_ids.count(raw.name))
            throw CorpusError("duplicate fact name '" + raw.name + "'", raw.line);
        if (raw.symbols.empty())
            throw CorpusError("fact '" + raw.name + "' has an empty symbol list", raw.line);
        Fact fact;
        fact.name = raw.name;
        for (const std::string& sym : raw.symbols) {
            check_token(sym, "symbol", raw.line);
            fact.symbols.push_back(corpus.symbols.intern(sym));
        }
        std::sort(fact.symbols.begin(), fact.symbols.end());
        fact.symbols.erase(std::unique(fact.symbols.begin(), fact.symbols.end()),
                           fact.symbols.end());
        corpus.fact_ids.emplace(fact.name, static_cast<FactId>(corpus.facts.size()));
        corpus.facts.push_back(std::move(fact));
    }

    auto resolve = [&](const std::vector<std::string>& names, const RawConjecture& raw,
                       const char* what) {
        std::vector<FactId> ids;
        ids.reserve(names.size());
        for (const std::string& n : names) {
            check_token(n, what, raw.line);
            auto id = corpus.fact_id(n);
            if (!id)
                throw CorpusError("unknown fact '" + n + "' in " + what + " list of '" +
                                      raw.name + "'",
                                  raw.line);
            ids.push_back(*id);
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    };

    std::unordered_map<std::string, std::size_t> conjecture_names;
    for (const RawConjecture& raw : conjectures_) {
        check_token(raw.name, "conjecture name", raw.line);
        if (conjecture_names.count(raw.name))
            throw CorpusError("duplicate conjecture name '" + raw.name + "'", raw.line);
        conjecture_names.emplace(raw.name, raw.line);
        if (corpus.fact_ids.count(raw.name))
            throw CorpusError("conjecture name '" + raw.name + "' collides with a fact name",
                              raw.line);
        if (raw.goal_symbols.empty())
            throw CorpusError("conjecture '" + raw.name + "' has an empty symbol list", raw.line);
        if (raw.required.empty())
            throw CorpusError("conjecture '" + raw.name + "' has an empty required list",
                              raw.line);
        if (raw.explicit_accessible && raw.accessible.empty())
            throw CorpusError("conjecture '" + raw.name + "' has an empty accessible list",
                              raw.line);

        Conjecture conj;
        conj.name = raw.name;
        for (const std::string& sym : raw.goal_symbols) {
            check_token(sym, "symbol", raw.line);
            conj.goal_symbols.push_back(corpus.symbols.intern(sym));
        }
        std::sort(conj.goal_symbols.begin(), conj.goal_symbols.end());
        conj.goal_symbols.erase(std::unique(conj.goal_symbols.begin(), conj.goal_symbols.end()),
                                conj.goal_symbols.end());

        conj.required = resolve(raw.required, raw, "required");
        if (raw.explicit_accessible) {
            conj.accessible = resolve(raw.accessible, raw, "accessible");
            if (!std::includes(conj.accessible.begin(), conj.accessible.end(),
                               conj.required.begin(), conj.required.end()))
                throw CorpusError("required facts of '" + raw.name +
                                      "' are not all accessible",
                                  raw.line);
        } else {
            conj.accessible.resize(corpus.facts.size());
            for (FactId i = 0; i < corpus.facts.size(); ++i) conj.accessible[i] = i;
        }
        corpus.conjectures.push_back(std::move(conj));
    }

    return corpus;
}

Corpus parse_corpus(std::string_view text) {
    CorpusBuilder builder;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        bool last = end == text.size();
        pos = end + 1;
        ++lineno;

        line = trim(line);
        if (line.empty() || line.front() == '#') {
            if (last) break;
            continue;
        }

        char kind = line.front();
        if ((kind != 'F' && kind != 'C') || line.size() < 2 ||
            !std::isspace(static_cast<unsigned char>(line[1])))
            throw CorpusError("malformed line, expected 'F <name>: ...' or 'C <name>: ...'",
                              lineno);

        std::string_view rest = trim(line.substr(1));
        std::size_t colon = rest.find(':');
        if (colon == std::string_view::npos)
            throw CorpusError("malformed line, missing ':' after name", lineno);
        std::string name{trim(rest.substr(0, colon))};
        std::string_view tail = trim(rest.substr(colon + 1));

        if (kind == 'F') {
            if (tail.empty())
                throw CorpusError("fact '" + name + "' has an empty symbol list", lineno);
            builder.add_fact(std::move(name), split_list(tail, ','), lineno);
        } else {
            std::vector<std::string_view> groups;
            std::size_t start = 0;
            while (true) {
                std::size_t semi = tail.find(';', start);
                if (semi == std::string_view::npos) {
                    groups.push_back(trim(tail.substr(start)));
                    break;
                }
                groups.push_back(trim(tail.substr(start, semi - start)));
                start = semi + 1;
            }
            if (groups.size() < 2)
                throw CorpusError("conjecture '" + name + "' is missing the required-facts group",
                                  lineno);
            if (groups.size() > 3)
                throw CorpusError("conjecture '" + name + "' has too many ';' groups", lineno);
            if (groups[0].empty())
                throw CorpusError("conjecture '" + name + "' has an empty symbol list", lineno);
            bool has_accessible = groups.size() == 3;
            builder.add_conjecture(std::move(name), split_list(groups[0], ','),
                                   split_whitespace(groups[1]),
                                   has_accessible ? split_whitespace(groups[2])
                                                  : std::vector<std::string>{},
                                   has_accessible, lineno);
        }
        if (last) break;
    }
    return builder.build();
}

std::string render_corpus(const Corpus& corpus) {
    std::ostringstream out;
    for (const Fact& fact : corpus.facts) {
        out << "F " << fact.name << ":";
        for (std::size_t i = 0; i < fact.symbols.size(); ++i)
            out << (i == 0 ? " " : ", ") << corpus.symbols.name(fact.symbols[i]);
        out << '\n';
    }
    for (const Conjecture& conj : corpus.conjectures) {
        out << "C " << conj.name << ":";
        for (std::size_t i = 0; i < conj.goal_symbols.size(); ++i)
            out << (i == 0 ? " " : ", ") << corpus.symbols.name(conj.goal_symbols[i]);
        out << " ;";
        for (FactId id : conj.required) out << ' ' << corpus.facts[id].name;
        if (conj.accessible.size() != corpus.facts.size()) {
            out << " ;";
            for (FactId id : conj.accessible) out << ' ' << corpus.facts[id].name;
        }
        out << '\n';
    }
    return out.str();
}

OccurrenceTable symbol_occurrences(const Corpus& corpus) {
    OccurrenceTable occ(corpus.symbols.size(), 0);
    for (const Fact& fact : corpus.facts)
        for (SymbolId s : fact.symbols) ++occ[s];
    return occ;
}

}  // namespace sinetune
