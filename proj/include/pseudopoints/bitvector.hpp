#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace pseudopoints {

/// Fixed-size bit set. Hex form: byte k holds bits 8k..8k+7, least significant
/// bit first; bytes are written in increasing order as two lowercase digits.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t size, bool value = false)
        : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        trim();
    }

    std::size_t size() const noexcept { return size_; }

    bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    std::size_t count() const noexcept {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    std::string to_hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        const std::size_t bytes = (size_ + 7) / 8;
        out.reserve(2 * bytes);
        for (std::size_t k = 0; k < bytes; ++k) {
            auto byte = static_cast<unsigned>((words_[k / 8] >> (8 * (k % 8))) & 0xff);
            out.push_back(digits[byte >> 4]);
            out.push_back(digits[byte & 0xf]);
        }
        return out;
    }

    static BitVector from_hex(std::string_view hex, std::size_t size) {
        if (hex.size() != 2 * ((size + 7) / 8))
            throw DomainError("hex bit vector has wrong length for size " + std::to_string(size));
        BitVector out(size);
        auto nibble = [](char c) -> unsigned {
            if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
            if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
            throw DomainError(std::string("invalid hex digit '") + c + "'");
        };
        for (std::size_t k = 0; 2 * k < hex.size(); ++k) {
            std::uint64_t byte = nibble(hex[2 * k]) << 4 | nibble(hex[2 * k + 1]);
            out.words_[k / 8] |= byte << (8 * (k % 8));
        }
        if (out.has_stray_bits()) throw DomainError("hex bit vector sets bits past its size");
        return out;
    }

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    void trim() noexcept {
        if (size_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }
    bool has_stray_bits() const noexcept {
        if (size_ % 64 == 0 || words_.empty()) return false;
        return (words_.back() >> (size_ % 64)) != 0;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace pseudopoints
