#pragma once

#include <algorithm>
#include <condition_variable>
#include <cstddef>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "degsynth/random.hpp"

namespace degsynth {

class PoolClosed : public std::runtime_error {
 public:
  PoolClosed() : std::runtime_error("pair pool closed") {}
};

/// Bounded pool of training pairs shared by producers and one consumer.
///
/// Draws take `batch` entries uniformly at random without replacement and
/// remove them, freeing their slots for producers. The first draw waits for
/// max(batch, capacity / 2) entries so early batches are not dominated by a
/// handful of degradations; later draws only need `batch`.
///
/// All operations hold one mutex, so any interleaving is equivalent to some
/// sequential order of pushes and draws.
template <class T>
class PairPool {
 public:
  static constexpr std::size_t kDefaultCapacity = 180;

  explicit PairPool(std::size_t capacity = kDefaultCapacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("pair pool capacity must be positive");
    entries_.reserve(capacity);
  }

  PairPool(const PairPool&) = delete;
  PairPool& operator=(const PairPool&) = delete;

  std::size_t capacity() const { return capacity_; }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }

  /// Blocks while the pool is full. Throws PoolClosed if closed.
  void push(T item) {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [&] { return closed_ || entries_.size() < capacity_; });
    if (closed_) throw PoolClosed();
    entries_.push_back(std::move(item));
    lock.unlock();
    not_empty_.notify_all();
  }

  /// Returns false instead of blocking when the pool is full.
  bool try_push(T item) {
    {
      std::lock_guard lock(mutex_);
      if (closed_) throw PoolClosed();
      if (entries_.size() >= capacity_) return false;
      entries_.push_back(std::move(item));
    }
    not_empty_.notify_all();
    return true;
  }

  /// Blocks until a batch can be drawn. Throws PoolClosed if the pool is
  /// closed before that happens.
  std::vector<T> draw_batch(std::size_t batch, RandomSource& rng) {
    check_batch(batch);
    std::unique_lock lock(mutex_);
    not_empty_.wait(lock, [&] { return closed_ || entries_.size() >= required(batch); });
    if (entries_.size() < required(batch)) throw PoolClosed();
    std::vector<T> out = take(batch, rng);
    lock.unlock();
    not_full_.notify_all();
    return out;
  }

  /// Returns nothing instead of blocking when too few entries are present.
  std::optional<std::vector<T>> try_draw_batch(std::size_t batch, RandomSource& rng) {
    check_batch(batch);
    std::vector<T> out;
    {
      std::lock_guard lock(mutex_);
      if (entries_.size() < required(batch)) return std::nullopt;
      out = take(batch, rng);
    }
    not_full_.notify_all();
    return out;
  }

  /// Wakes every waiter; later pushes throw and draws only succeed while
  /// enough entries remain.
  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    not_full_.notify_all();
    not_empty_.notify_all();
  }

 private:
  void check_batch(std::size_t batch) const {
    if (batch == 0 || batch > capacity_) {
      throw std::invalid_argument("batch size must lie in [1, capacity]");
    }
  }

  std::size_t required(std::size_t batch) const {
    return warmed_up_ ? batch : std::max(batch, capacity_ / 2);
  }

  // Partial Fisher-Yates over the stored entries.
  std::vector<T> take(std::size_t batch, RandomSource& rng) {
    const std::size_t n = entries_.size();
    for (std::size_t k = 0; k < batch; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng.uniform_index(n - k));
      std::swap(entries_[k], entries_[j]);
    }
    std::vector<T> out(std::make_move_iterator(entries_.begin()),
                       std::make_move_iterator(entries_.begin() + batch));
    entries_.erase(entries_.begin(), entries_.begin() + batch);
    warmed_up_ = true;
    return out;
  }

  const std::size_t capacity_;
  mutable std::mutex mutex_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
  std::vector<T> entries_;
  bool warmed_up_ = false;
  bool closed_ = false;
};

}  // namespace degsynth
