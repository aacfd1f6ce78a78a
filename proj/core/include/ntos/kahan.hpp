#pragma once

namespace ntos {

// Neumaier-compensated accumulator. Summation order is part of every
// contract that uses it, so callers must feed terms in the documented order.
template <class T>
class KahanSum {
public:
    KahanSum() = default;
    explicit KahanSum(T init) : sum_(init) {}

    void add(T value) {
        const T t = sum_ + value;
        // Neumaier branch: compensate with whichever operand lost low bits.
        if ((sum_ < 0 ? -sum_ : sum_) >= (value < 0 ? -value : value)) {
            comp_ += (sum_ - t) + value;
        } else {
            comp_ += (value - t) + sum_;
        }
        sum_ = t;
    }

    KahanSum& operator+=(T value) {
        add(value);
        return *this;
    }

    T value() const { return sum_ + comp_; }

private:
    T sum_ = 0;
    T comp_ = 0;
};

}  // namespace ntos
