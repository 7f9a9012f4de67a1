#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <span>
#include <vector>

namespace atlapprox
{
  using state_id = std::uint32_t;

  /// \brief Dense set of states over a fixed universe `0 .. size()-1`.
  ///
  /// The currency of fixpoint evaluation: every denotation is a
  /// StateSet.  Iteration is in increasing state order.
  class StateSet
  {
  public:
    using word = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    StateSet() = default;

    explicit StateSet(std::size_t universe, bool full = false)
      : size_(universe), words_((universe + word_bits - 1) / word_bits, 0)
    {
      if (full)
        fill();
    }

    StateSet(std::size_t universe, std::initializer_list<state_id> members)
      : StateSet(universe)
    {
      for (state_id s : members)
        insert(s);
    }

    static StateSet full(std::size_t universe) { return StateSet(universe, true); }

    std::size_t size() const noexcept { return size_; }

    bool contains(state_id s) const noexcept
    {
      assert(s < size_);
      return (words_[s / word_bits] >> (s % word_bits)) & 1u;
    }

    void insert(state_id s) noexcept
    {
      assert(s < size_);
      words_[s / word_bits] |= word{1} << (s % word_bits);
    }

    void erase(state_id s) noexcept
    {
      assert(s < size_);
      words_[s / word_bits] &= ~(word{1} << (s % word_bits));
    }

    void fill() noexcept
    {
      std::fill(words_.begin(), words_.end(), ~word{0});
      trim();
    }

    void clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

    std::size_t count() const noexcept
    {
      std::size_t n = 0;
      for (word w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
      return n;
    }

    bool empty() const noexcept
    {
      return std::all_of(words_.begin(), words_.end(),
                         [](word w) { return w == 0; });
    }

    bool is_subset_of(const StateSet& other) const noexcept
    {
      assert(size_ == other.size_);
      for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i])
          return false;
      return true;
    }

    bool intersects(const StateSet& other) const noexcept
    {
      assert(size_ == other.size_);
      for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & other.words_[i])
          return true;
      return false;
    }

    StateSet& operator|=(const StateSet& o) noexcept
    {
      assert(size_ == o.size_);
      for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] |= o.words_[i];
      return *this;
    }

    StateSet& operator&=(const StateSet& o) noexcept
    {
      assert(size_ == o.size_);
      for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] &= o.words_[i];
      return *this;
    }

    /// Set difference.
    StateSet& operator-=(const StateSet& o) noexcept
    {
      assert(size_ == o.size_);
      for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] &= ~o.words_[i];
      return *this;
    }

    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
    friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

    /// Complement relative to the universe.
    StateSet operator~() const
    {
      StateSet r(*this);
      for (word& w : r.words_)
        w = ~w;
      r.trim();
      return r;
    }

    friend bool operator==(const StateSet&, const StateSet&) = default;

    std::size_t hash() const noexcept
    {
      std::size_t h = size_;
      for (word w : words_)
        h ^= std::hash<word>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return h;
    }

    class const_iterator
    {
    public:
      using iterator_category = std::forward_iterator_tag;
      using value_type = state_id;
      using difference_type = std::ptrdiff_t;
      using pointer = const state_id*;
      using reference = state_id;

      const_iterator() = default;
      const_iterator(const StateSet* set, std::size_t pos) : set_(set), pos_(pos)
      {
        advance_to_member();
      }

      state_id operator*() const noexcept { return static_cast<state_id>(pos_); }
      const_iterator& operator++() noexcept
      {
        ++pos_;
        advance_to_member();
        return *this;
      }
      const_iterator operator++(int) noexcept
      {
        auto t = *this;
        ++*this;
        return t;
      }
      friend bool operator==(const const_iterator& a, const const_iterator& b)
      {
        return a.pos_ == b.pos_;
      }

    private:
      void advance_to_member() noexcept
      {
        const std::size_t n = set_->size_;
        while (pos_ < n)
          {
            word w = set_->words_[pos_ / word_bits] >> (pos_ % word_bits);
            if (w)
              {
                pos_ += static_cast<std::size_t>(std::countr_zero(w));
                return;
              }
            pos_ = (pos_ / word_bits + 1) * word_bits;
          }
        pos_ = n;
      }

      const StateSet* set_ = nullptr;
      std::size_t pos_ = 0;
    };

    const_iterator begin() const { return const_iterator(this, 0); }
    const_iterator end() const { return const_iterator(this, size_); }

    std::vector<state_id> to_vector() const { return {begin(), end()}; }

    std::span<const word> words() const noexcept { return words_; }

  private:
    void trim() noexcept
    {
      if (size_ % word_bits && !words_.empty())
        words_.back() &= (word{1} << (size_ % word_bits)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<word> words_;
  };

  struct StateSetHash
  {
    std::size_t operator()(const StateSet& s) const noexcept { return s.hash(); }
  };
}
