#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <string>

namespace regbis {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::rational<Int>;

inline std::string to_string(const Rat& r) {
    if (r.denominator() == 1) return r.numerator().str();
    return r.numerator().str() + "/" + r.denominator().str();
}

}  // namespace regbis
