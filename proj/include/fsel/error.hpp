#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace fsel {

// Base class for every failure raised by the library. Each subclass maps to
// one error condition of a public operation; the CLI turns them into exit
// codes (see tools/fsel.cpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownSymbol : public Error {
public:
    explicit UnknownSymbol(const std::string& token)
        : Error("unknown symbol '" + token + "'"), token_(token) {}
    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

class UndefinedTransition : public Error {
public:
    UndefinedTransition(std::string state, std::string symbol, std::size_t position)
        : Error("undefined transition from state " + state + " on symbol " + symbol +
                (position ? " at input position " + std::to_string(position) : std::string{})),
          state_(std::move(state)), symbol_(std::move(symbol)), position_(position) {}
    const std::string& state() const noexcept { return state_; }
    const std::string& symbol() const noexcept { return symbol_; }
    /// 1-based input position, 0 when not known.
    std::size_t position() const noexcept { return position_; }

private:
    std::string state_;
    std::string symbol_;
    std::size_t position_;
};

class NotOblivious : public Error {
public:
    explicit NotOblivious(const std::string& state)
        : Error("selector is not oblivious: state " + state + " has mixed actions"), state_(state) {}
    const std::string& state() const noexcept { return state_; }

private:
    std::string state_;
};

class NotIrreducible : public Error {
public:
    NotIrreducible(const std::string& from, const std::string& to)
        : Error("not irreducible: no path from " + from + " to " + to), from_(from), to_(to) {}
    const std::string& from() const noexcept { return from_; }
    const std::string& to() const noexcept { return to_; }

private:
    std::string from_;
    std::string to_;
};

class NonConvergence : public Error {
public:
    explicit NonConvergence(std::size_t iterations)
        : Error("eigen-solver did not converge within " + std::to_string(iterations) + " iterations"),
          iterations_(iterations) {}
    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

class WeightsNotNormalized : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class CapExceeded : public Error {
public:
    CapExceeded(std::size_t requested, std::size_t cap)
        : Error("enumeration of " + std::to_string(requested) + " runs exceeds cap " +
                std::to_string(cap) + "; use the statistical experiment instead") {}
};

class Incomplete : public Error {
public:
    Incomplete(const std::string& state, const std::string& symbol)
        : Error("automaton is incomplete: no transition from " + state + " on " + symbol) {}
};

class NotShiftComplete : public Error {
public:
    NotShiftComplete(const std::string& state, const std::string& symbol)
        : Error("automaton is not shift-complete: missing transition from " + state + " on " + symbol) {}
};

class NotStronglyConnected : public Error {
public:
    NotStronglyConnected() : Error("machine is not strongly connected") {}
};

class NotCompatible : public Error {
public:
    using Error::Error;
};

class UnrealizableRun : public Error {
public:
    using Error::Error;
};

class DeadEnd : public Error {
public:
    explicit DeadEnd(const std::string& symbol)
        : Error("sampler dead end: row of symbol " + symbol + " has no mass") {}
};

class BlockLengthOutOfRange : public Error {
public:
    BlockLengthOutOfRange(std::size_t k, std::size_t n)
        : Error("block length " + std::to_string(k) + " out of range for sequence of length " +
                std::to_string(n)) {}
};

}  // namespace fsel
