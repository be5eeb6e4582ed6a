#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sinetune {

using SymbolId = std::uint32_t;
using FactId = std::uint32_t;

/// Parse or validation failure. `line()` is 1-based; 0 when the error is not
/// tied to a specific input line.
class CorpusError : public std::runtime_error {
public:
    explicit CorpusError(const std::string& message, std::size_t line = 0);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Dense symbol interner; name <-> id is a bijection.
class SymbolTable {
public:
    SymbolId intern(std::string_view name);
    std::optional<SymbolId> find(std::string_view name) const;
    const std::string& name(SymbolId id) const { return names_.at(id); }
    std::size_t size() const noexcept { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, SymbolId> ids_;
};

struct Fact {
    std::string name;
    std::vector<SymbolId> symbols;  // sorted, unique, non-empty
};

struct Conjecture {
    std::string name;
    std::vector<SymbolId> goal_symbols;  // sorted, unique, non-empty
    std::vector<FactId> required;        // sorted, unique, non-empty
    std::vector<FactId> accessible;      // sorted, unique, required is a subset
};

/// Immutable after construction; share freely across threads.
struct Corpus {
    SymbolTable symbols;
    std::vector<Fact> facts;
    std::vector<Conjecture> conjectures;
    std::unordered_map<std::string, FactId> fact_ids;

    std::optional<FactId> fact_id(std::string_view name) const;
};

/// Accumulates raw records, then validates and interns everything in build().
/// An empty `accessible` means "all facts".
class CorpusBuilder {
public:
    CorpusBuilder& add_fact(std::string name, std::vector<std::string> symbols,
                            std::size_t line = 0);
    CorpusBuilder& add_conjecture(std::string name, std::vector<std::string> goal_symbols,
                                  std::vector<std::string> required,
                                  std::vector<std::string> accessible = {},
                                  bool explicit_accessible = false, std::size_t line = 0);
    Corpus build() const;

private:
    struct RawFact {
        std::string name;
        std::vector<std::string> symbols;
        std::size_t line;
    };
    struct RawConjecture {
        std::string name;
        std::vector<std::string> goal_symbols;
        std::vector<std::string> required;
        std::vector<std::string> accessible;
        bool explicit_accessible;
        std::size_t line;
    };
    std::vector<RawFact> facts_;
    std::vector<RawConjecture> conjectures_;
};

/// Line-oriented corpus format:
///   F <name>: <sym>[, <sym>]*
///   C <name>: <sym>[, <sym>]* ; <fact>[ <fact>]* [; <fact>[ <fact>]*]
/// `#` starts a comment line, blank lines are skipped. The first `;` group of a
/// conjecture is its required premises, the optional second group the
/// accessible ones (default: every fact).
Corpus parse_corpus(std::string_view text);

/// Inverse of parse_corpus up to symbol re-interning by name. The accessible
/// group is omitted when it covers the whole fact list.
std::string render_corpus(const Corpus& corpus);

/// occ(s): number of facts a symbol occurs in, indexed by SymbolId.
/// Goal-only symbols map to 0.
using OccurrenceTable = std::vector<std::uint32_t>;
OccurrenceTable symbol_occurrences(const Corpus& corpus);

}  // namespace sinetune
