#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tokaudit {

class Vocab;

struct MergePair {
    std::string left;
    std::string right;

    bool operator==(const MergePair&) const = default;
};

// Ordered list of BPE merge rules; rank = application priority (0 first).
class MergeTable {
public:
    MergeTable() = default;

    // Two space-separated symbols per line; an optional leading "#version"
    // header and blank lines are skipped. Malformed lines -> ParseError
    // naming the 1-based line; duplicate pairs -> IntegrityError.
    static MergeTable from_text(std::string_view text);
    static MergeTable from_file(const std::string& path);

    // Inverse of from_text. Throws IntegrityError when a symbol cannot be
    // represented in the two-column format (contains a space or newline).
    std::string to_text() const;

    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }

    std::optional<int> rank_of(std::string_view left, std::string_view right) const;
    const MergePair& at(int rank) const { return pairs_.at(static_cast<std::size_t>(rank)); }

    // Appends with the next rank; IntegrityError on a duplicate pair.
    void add(std::string left, std::string right);

    // Every merge result (left + right) must be a vocabulary token.
    // Throws IntegrityError naming the offending rank.
    void validate_against(const Vocab& vocab) const;

private:
    struct PairHash {
        using is_transparent = void;
        std::size_t operator()(std::pair<std::string_view, std::string_view> p) const noexcept {
            std::size_t a = std::hash<std::string_view>{}(p.first);
            std::size_t b = std::hash<std::string_view>{}(p.second);
            return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
        }
        std::size_t operator()(const std::pair<std::string, std::string>& p) const noexcept {
            return (*this)(std::pair<std::string_view, std::string_view>(p.first, p.second));
        }
    };
    struct PairEq {
        using is_transparent = void;
        template <class A, class B>
        bool operator()(const A& x, const B& y) const noexcept {
            return x.first == y.first && x.second == y.second;
        }
    };

    std::vector<MergePair> pairs_;
    std::unordered_map<std::pair<std::string, std::string>, int, PairHash, PairEq> rank_;
};

} // namespace tokaudit
