#include "mbs/rational.hpp"

namespace mbs {

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0)
        throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat rat_from_string(const std::string& text) {
    if (text.empty())
        throw ParseError("empty rational");
    auto slash = text.find('/');
    auto check_int = [&](const std::string& part) {
        if (part.empty())
            throw ParseError("malformed rational '" + text + "'");
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size())
            throw ParseError("malformed rational '" + text + "'");
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9')
                throw ParseError("malformed rational '" + text + "'");
    };
    if (slash == std::string::npos) {
        check_int(text);
        return Rat(Int(text));
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    check_int(num);
    check_int(den);
    Int d(den);
    if (d == 0)
        throw ParseError("zero denominator in '" + text + "'");
    return make_rat(Int(num), d);
}

std::string rat_to_string(const Rat& value) {
    if (value.get_den() == 1)
        return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double rat_to_double(const Rat& value) {
    return value.get_d();
}

Int rat_floor(const Rat& value) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), value.get_num().get_mpz_t(), value.get_den().get_mpz_t());
    return q;
}

Int rat_ceil(const Rat& value) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), value.get_num().get_mpz_t(), value.get_den().get_mpz_t());
    return q;
}

Int floor_sqrt(const Int& n) {
    if (n < 0)
        throw std::domain_error("floor_sqrt of negative");
    Int root;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    return root;
}

bool rat_sqrt_exact(const Rat& value, Rat& root) {
    if (value < 0)
        return false;
    const Int& num = value.get_num();
    const Int& den = value.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
        root = make_rat(floor_sqrt(num), floor_sqrt(den));
        return true;
    }
    return false;
}

Rat sqrt_upper_bound(const Rat& value, unsigned bits) {
    if (value < 0)
        throw std::domain_error("sqrt_upper_bound of negative");
    Int scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), bits);
    // least m with m^2 * den >= num * scale^2
    Int target = value.get_num() * scale * scale;
    const Int& den = value.get_den();
    Int quot = target / den; // floor
    Int m = floor_sqrt(quot);
    while (m * m * den < target)
        m += 1;
    while (m > 0 && (m - 1) * (m - 1) * den >= target)
        m -= 1;
    return make_rat(m, scale);
}

} // namespace mbs
