#ifndef NCPICK_ERRORS_HPP
#define NCPICK_ERRORS_HPP

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ncpick
{

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

class DegenerateCorrespondence : public Error
{
public:
    DegenerateCorrespondence() : Error("degenerate correspondence: every edge multiplicity is zero") {}
};

class NotHermitianError : public Error
{
public:
    explicit NotHermitianError(double defect)
        : Error("matrix is not Hermitian: ||A - A*|| = " + std::to_string(defect)), defect(defect)
    {
    }
    double defect;
};

class IndefiniteError : public Error
{
public:
    explicit IndefiniteError(double min_eigenvalue)
        : Error("matrix is not positive semidefinite: min eigenvalue " + std::to_string(min_eigenvalue)),
          min_eigenvalue(min_eigenvalue)
    {
    }
    double min_eigenvalue;
};

class NotInCommutant : public Error
{
public:
    explicit NotInCommutant(double off_block_norm)
        : Error("matrix is not in the commutant: off-vertex block norm " + std::to_string(off_block_norm)),
          off_block_norm(off_block_norm)
    {
    }
    double off_block_norm;
};

class NormError : public Error
{
public:
    explicit NormError(double norm)
        : Error("point norm " + std::to_string(norm) + " is not < 1"), norm(norm)
    {
    }
    double norm;
};

class CapExceeded : public Error
{
public:
    CapExceeded(int required_level, double required_entries, double cap)
        : Error(describe(required_level, required_entries, cap)), required_level(required_level),
          required_entries(required_entries), cap(cap)
    {
    }
    int required_level;
    double required_entries;
    double cap;

private:
    static std::string describe(int k, double entries, double cap)
    {
        std::ostringstream os;
        os << "level cap exceeded: level K=" << k << " needs " << entries << " entries, cap is " << cap;
        return os.str();
    }
};

class ResidualError : public Error
{
public:
    ResidualError(const std::string& what_equation, double value, double bound)
        : Error(describe(what_equation, value, bound)), equation(what_equation), value(value), bound(bound)
    {
    }
    std::string equation;
    double value;
    double bound;

private:
    static std::string describe(const std::string& eq, double value, double bound)
    {
        std::ostringstream os;
        os << "residual check failed for " << eq << ": " << value << " > " << bound;
        return os.str();
    }
};

class ParseError : public Error
{
public:
    using Error::Error;
};

} // namespace ncpick

#endif // NCPICK_ERRORS_HPP
