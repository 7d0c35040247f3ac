// A short walk through the library: plays, vectors, equivalence and the process translation.
#include <iostream>

#include "ordalg/equivalence.hpp"
#include "ordalg/io.hpp"
#include "ordalg/pi/parser.hpp"
#include "ordalg/pi/translate.hpp"

using namespace ordalg;

int main() {
    // two plays over three static events, synchronised
    const Arena web = io::parse_arena("static(x,y,z)");
    const Play r = io::parse_play(web, "{x<y, z}");
    const Play s = io::parse_play(web, "{y<z, x}");
    std::cout << "r sync s = " << io::format_play(web, *sync(r, s)) << "\n";

    // a vector and an equivalent rewrite of it
    const auto u = io::parse_vector<Natural>(web, "{x<y, z}; {x<z<y}");
    const auto v = io::parse_vector<Natural>(web, "{x<y, x<z}; {x<y, z<y}");
    std::cout << "u equivalent to v: " << std::boolalpha << obs_equiv(u, v) << "\n";

    // a process, its outcome and its denotation
    const auto p = pi::parse_term<Natural>("a?(x).{1} | a?(y).{1}");
    const auto q = pi::parse_term<Natural>("a!(z).{1}");
    std::cout << "P = " << pi::to_text(p) << "\n";
    std::cout << "translation of P:\n" << io::format_vector(pi::translate(p));
    const auto check = pi::cross_check(p, q);
    std::cout << "outcome of P | Q: " << check.operational << ", pairing of denotations: " << check.denotational
              << "\n";
}
