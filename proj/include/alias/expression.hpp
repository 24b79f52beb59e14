// expression.hpp
//
// Tags (interned identifiers, optionally negated) and path expressions.
// An expression is a sequence of tags; the empty sequence is Current.

#ifndef ALIAS_EXPRESSION_HPP
#define ALIAS_EXPRESSION_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace alias {

// Process-wide append-only symbol table. Ids are stable for the lifetime of
// the process; nothing observable depends on their numeric order.
class SymbolTable {
public:
    static SymbolTable& instance() {
        static SymbolTable table;
        return table;
    }

    std::uint32_t intern(std::string_view name) {
        std::lock_guard lock(mutex_);
        auto it = ids_.find(std::string(name));
        if (it != ids_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(names_.size());
        names_.emplace_back(name);
        ids_.emplace(names_.back(), id);
        return id;
    }

    std::string name(std::uint32_t id) const {
        std::lock_guard lock(mutex_);
        return names_.at(id);
    }

private:
    SymbolTable() = default;
    mutable std::mutex mutex_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

/// A variable or attribute name. Negative tags (x') only appear while a
/// relation is transposed into the context of a qualified call.
class Tag {
public:
    Tag() = default;
    explicit Tag(std::string_view name, bool negative = false)
        : bits_(SymbolTable::instance().intern(name) << 1 | (negative ? 1u : 0u)) {}

    static Tag from_bits(std::uint32_t bits) {
        Tag t;
        t.bits_ = bits;
        return t;
    }

    std::uint32_t bits() const { return bits_; }
    std::uint32_t symbol() const { return bits_ >> 1; }
    bool negative() const { return (bits_ & 1u) != 0; }
    Tag negated() const { return from_bits(bits_ ^ 1u); }
    Tag positive() const { return from_bits(bits_ & ~1u); }
    bool is_inverse_of(Tag other) const { return (bits_ ^ other.bits_) == 1u; }

    std::string name() const { return SymbolTable::instance().name(symbol()); }
    std::string str() const { return negative() ? name() + "'" : name(); }

    friend auto operator<=>(Tag, Tag) = default;

private:
    std::uint32_t bits_ = 0;
};

/// Path expression. Ordering is lexicographic on tags, so every expression
/// rooted at a given prefix occupies a contiguous range of an ordered set.
class Expression {
public:
    Expression() = default;
    explicit Expression(std::vector<Tag> tags) : tags_(std::move(tags)) {}
    Expression(std::initializer_list<Tag> tags) : tags_(tags) {}

    static Expression current() { return {}; }

    /// Parses "a.b.c", "Current", "Current.a" or "x'.a" (negative tags).
    static Expression parse(std::string_view text) {
        std::vector<Tag> tags;
        std::size_t start = 0;
        while (start <= text.size()) {
            auto dot = text.find('.', start);
            auto part = text.substr(start, dot == std::string_view::npos ? std::string_view::npos
                                                                         : dot - start);
            if (!part.empty() && part != "Current") {
                bool neg = part.back() == '\'';
                if (neg) part.remove_suffix(1);
                tags.emplace_back(part, neg);
            }
            if (dot == std::string_view::npos) break;
            start = dot + 1;
        }
        return Expression(std::move(tags));
    }

    bool is_current() const { return tags_.empty(); }
    std::size_t size() const { return tags_.size(); }
    std::span<const Tag> tags() const { return tags_; }
    Tag front() const { return tags_.front(); }
    Tag back() const { return tags_.back(); }
    Tag operator[](std::size_t i) const { return tags_[i]; }

    /// Number of positive tags; the measure the cutoff applies to.
    std::size_t length() const {
        return static_cast<std::size_t>(
            std::count_if(tags_.begin(), tags_.end(), [](Tag t) { return !t.negative(); }));
    }

    bool has_negative() const {
        return std::any_of(tags_.begin(), tags_.end(), [](Tag t) { return t.negative(); });
    }
    bool starts_negative() const { return !tags_.empty() && tags_.front().negative(); }

    bool starts_with(const Expression& prefix) const {
        return prefix.size() <= size() &&
               std::equal(prefix.tags_.begin(), prefix.tags_.end(), tags_.begin());
    }
    bool rooted_at(Tag t) const { return !tags_.empty() && tags_.front() == t; }

    Expression prefix(std::size_t n) const {
        return Expression(std::vector<Tag>(tags_.begin(), tags_.begin() + static_cast<long>(n)));
    }
    Expression suffix_from(std::size_t n) const {
        return Expression(std::vector<Tag>(tags_.begin() + static_cast<long>(n), tags_.end()));
    }

    /// Concatenation; adjacent inverse tags cancel at the junction
    /// (t'.t = Current and t.t' = Current).
    Expression dot(const Expression& rhs) const {
        std::vector<Tag> out = tags_;
        std::size_t i = 0;
        while (i < rhs.size() && !out.empty() && out.back().is_inverse_of(rhs.tags_[i])) {
            out.pop_back();
            ++i;
        }
        out.insert(out.end(), rhs.tags_.begin() + static_cast<long>(i), rhs.tags_.end());
        return Expression(std::move(out));
    }
    Expression dot(Tag t) const { return dot(Expression{t}); }

    /// x' for x = t1...tn is tn'...t1'.
    Expression inverse() const {
        std::vector<Tag> out;
        out.reserve(tags_.size());
        for (auto it = tags_.rbegin(); it != tags_.rend(); ++it) out.push_back(it->negated());
        return Expression(std::move(out));
    }

    std::string str() const {
        if (tags_.empty()) return "Current";
        std::string s;
        for (std::size_t i = 0; i < tags_.size(); ++i) {
            if (i) s += '.';
            s += tags_[i].str();
        }
        return s;
    }

    friend bool operator==(const Expression&, const Expression&) = default;
    friend auto operator<=>(const Expression& a, const Expression& b) {
        return std::lexicographical_compare_three_way(a.tags_.begin(), a.tags_.end(),
                                                      b.tags_.begin(), b.tags_.end());
    }

private:
    std::vector<Tag> tags_;
};

/// Ordering by rendered text; used wherever output must be reproducible.
struct TextOrder {
    bool operator()(const Expression& a, const Expression& b) const {
        return a.str() < b.str();
    }
};

} // namespace alias

#endif
