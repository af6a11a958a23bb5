#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bpn/region.hpp"
#include "bpn/text.hpp"
#include "bpn/ts_io.hpp"
#include "bpn/union.hpp"

namespace bpn
{

// Raised when a region that meets every forced-signature requirement still
// yields a set of variables that is not a one-in-three model.
class falsification_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

// Negation-free 3-clauses over pairwise distinct variables, every variable in
// exactly three clauses. Variables are ordered by first appearance.
struct cubic_cnf
{
    std::vector<std::string> variables;
    std::vector<std::array<std::string, 3>> clauses;

    [[nodiscard]] std::size_t m() const { return clauses.size(); }
};

// Variables become events of the gadgets, so they must not collide with the
// fixed event names of the construction.
inline bool reserved_event_name( std::string_view name )
{
    static const std::set<std::string_view> fixed{ "k", "m", "z", "q0", "q1", "q2", "q3" };
    if ( fixed.contains( name ) )
        return true;
    auto numbered = []( std::string_view rest ) {
        return !rest.empty() && std::all_of( rest.begin(), rest.end(), []( char c ) { return c >= '0' && c <= '9'; } );
    };
    for ( std::string_view prefix : { "v", "w", "a", "y", "p", "u_" } )
        if ( name.starts_with( prefix ) && numbered( name.substr( prefix.size() ) ) )
            return true;
    return false;
}

// Checks the clause list; `lines` gives the source line of each clause for
// error messages (0 when unknown).
inline cubic_cnf validate_cnf( const std::vector<std::vector<std::string>>& clauses, const std::vector<std::size_t>& lines = {} )
{
    auto line_of = [&]( std::size_t i ) { return i < lines.size() ? lines[i] : 0; };
    auto where = [&]( std::size_t i ) { return "clause " + std::to_string( i ); };
    cubic_cnf f;
    std::map<std::string, std::size_t> count, first_line;
    for ( std::size_t i = 0; i < clauses.size(); ++i )
    {
        const auto& c = clauses[i];
        if ( c.size() != 3 )
            throw parse_error( where( i ) + " has " + std::to_string( c.size() ) + " literals, expected 3", line_of( i ) );
        for ( const auto& x : c )
        {
            if ( x.empty() || x.front() == '-' || x.front() == '~' || x.front() == '!' )
                throw parse_error( where( i ) + " contains negated literal '" + x + "'", line_of( i ) );
            if ( reserved_event_name( x ) )
                throw parse_error( where( i ) + ": variable name '" + x + "' is reserved by the construction", line_of( i ) );
        }
        if ( c[0] == c[1] || c[0] == c[2] || c[1] == c[2] )
            throw parse_error( where( i ) + " contains a duplicate variable", line_of( i ) );
        for ( const auto& x : c )
        {
            if ( !count.contains( x ) )
            {
                f.variables.push_back( x );
                first_line[x] = line_of( i );
            }
            ++count[x];
        }
        f.clauses.push_back( { c[0], c[1], c[2] } );
    }
    for ( const auto& x : f.variables )
        if ( count[x] != 3 )
            throw parse_error( "variable '" + x + "' occurs in " + std::to_string( count[x] ) + " clauses, expected 3",
                               first_line[x] );
    return f;
}

// CNF text format: header "p cnf13 <m>", then m lines of three variable
// names; lines starting with "c" are comments.
inline cubic_cnf parse_cnf( std::string_view content )
{
    std::optional<std::size_t> declared;
    std::vector<std::vector<std::string>> clauses;
    std::vector<std::size_t> lines;
    for ( const auto& l : text::split_lines( content ) )
    {
        if ( l.tokens.empty() || l.tokens.front() == "c" )
            continue;
        if ( l.tokens.front() == "p" )
        {
            if ( declared )
                throw parse_error( "second header line", l.number );
            if ( l.tokens.size() != 3 || l.tokens[1] != "cnf13" )
                throw parse_error( "expected header 'p cnf13 <m>'", l.number );
            try
            {
                std::size_t used = 0;
                const auto v = std::stoul( l.tokens[2], &used );
                if ( used != l.tokens[2].size() )
                    throw std::invalid_argument( "trailing" );
                declared = v;
            }
            catch ( const std::logic_error& )
            {
                throw parse_error( "clause count '" + l.tokens[2] + "' is not a number", l.number );
            }
            continue;
        }
        if ( !declared )
            throw parse_error( "clause before the header", l.number );
        clauses.push_back( l.tokens );
        lines.push_back( l.number );
    }
    if ( !declared )
        throw parse_error( "missing header 'p cnf13 <m>'" );
    if ( clauses.size() != *declared )
        throw parse_error( "header declares " + std::to_string( *declared ) + " clauses, found " +
                           std::to_string( clauses.size() ) );
    return validate_cnf( clauses, lines );
}

inline cubic_cnf read_cnf_file( const std::string& path )
{
    return parse_cnf( text::read_file( path ) );
}

inline std::string write_cnf( const cubic_cnf& f )
{
    std::string out = "p cnf13 " + std::to_string( f.m() ) + "\n";
    for ( const auto& c : f.clauses )
        out += c[0] + " " + c[1] + " " + c[2] + "\n";
    return out;
}

inline bool is_one_in_three( const cubic_cnf& f, const std::vector<std::string>& model )
{
    const std::set<std::string> chosen( model.begin(), model.end() );
    for ( const auto& c : f.clauses )
        if ( std::count_if( c.begin(), c.end(), [&]( const std::string& x ) { return chosen.contains( x ); } ) != 1 )
            return false;
    return std::all_of( model.begin(), model.end(),
                        [&]( const std::string& x ) { return std::find( f.variables.begin(), f.variables.end(), x ) != f.variables.end(); } );
}

// Every chosen variable covers three clause slots and every clause needs
// exactly one, so a model has m/3 variables. Candidates are index
// combinations of that size in lexicographic order.
inline std::optional<std::vector<std::string>> brute_force_one_in_three( const cubic_cnf& f )
{
    const auto n = f.variables.size();
    if ( f.m() % 3 != 0 )
        return std::nullopt;
    const auto size = f.m() / 3;
    if ( size > n )
        return std::nullopt;
    std::vector<std::size_t> pick( size );
    for ( std::size_t k = 0; k < size; ++k )
        pick[k] = k;
    while ( true )
    {
        std::vector<std::string> model;
        for ( auto k : pick )
            model.push_back( f.variables[k] );
        if ( is_one_in_three( f, model ) )
            return model;
        std::size_t k = size;
        while ( k > 0 && pick[k - 1] == n - size + ( k - 1 ) )
            --k;
        if ( k == 0 )
            return std::nullopt;
        ++pick[k - 1];
        for ( std::size_t j = k; j < size; ++j )
            pick[j] = pick[j - 1] + 1;
    }
}

// Names of the distinguished events and states of a gadget union.
struct gadget_roles
{
    sigma_class sigma = sigma_class::sigma1;
    std::string k = "k";
    std::string h02 = "h_{0,2}";
    std::vector<std::string> V, W, Acc;
    cubic_cnf formula;

    friend bool operator==( const gadget_roles& a, const gadget_roles& b )
    {
        return a.sigma == b.sigma && a.k == b.k && a.h02 == b.h02 && a.V == b.V && a.W == b.W && a.Acc == b.Acc &&
               a.formula.variables == b.formula.variables && a.formula.clauses == b.formula.clauses;
    }
};

struct gadget_union
{
    ts_union u;
    gadget_roles roles;
};

namespace detail
{

enum class dir
{
    both,
    forward,  // x -> x+1
    backward, // x+1 -> x
};

struct link
{
    std::string event;
    dir d = dir::both;
};

// A path gadget prefix_{idx,0} .. prefix_{idx,n}; the last state is initial.
inline transition_system path_gadget( const std::string& name, const std::string& prefix, const std::string& idx,
                                      const std::vector<link>& links )
{
    auto st = [&]( std::size_t x ) { return prefix + "_{" + idx + "," + std::to_string( x ) + "}"; };
    ts_builder b( name );
    for ( std::size_t x = 0; x <= links.size(); ++x )
        b.state( st( x ) );
    for ( std::size_t x = 0; x < links.size(); ++x )
    {
        const auto& l = links[x];
        if ( l.d == dir::both )
            b.both( st( x ), l.event, st( x + 1 ) );
        else if ( l.d == dir::forward )
            b.arc( st( x ), l.event, st( x + 1 ) );
        else
            b.arc( st( x + 1 ), l.event, st( x ) );
    }
    b.initial( st( links.size() ) );
    return b.build();
}

} // namespace detail

// Members in order: H_0..H_{4m-1}, F_0, F_1, F_2, G_0..G_{m-1},
// D_0..D_{3m-1}, then T_{i,0}..T_{i,3} per clause i. Each member ends in the
// unique event u_<member index> at its initial state.
inline gadget_union build_union( const cubic_cnf& f, sigma_class sigma )
{
    using detail::dir;
    using detail::link;
    const auto m = f.m();
    gadget_union g;
    g.roles.sigma = sigma;
    g.roles.formula = f;
    for ( std::size_t j = 0; j < 4 * m; ++j )
        g.roles.V.push_back( "v" + std::to_string( j ) );
    for ( std::size_t j = 0; j < m; ++j )
        g.roles.W.push_back( "w" + std::to_string( j ) );
    for ( std::size_t l = 0; l < 3 * m; ++l )
        g.roles.Acc.push_back( "a" + std::to_string( l ) );

    std::vector<transition_system> members;
    auto u = [&]() { return link{ "u_" + std::to_string( members.size() ) }; };
    auto s = []( std::size_t x ) { return std::to_string( x ); };

    for ( std::size_t j = 0; j < 4 * m; ++j )
        members.push_back( detail::path_gadget( "H_" + s( j ), "h", s( j ), { { "k" }, { "m" }, { "v" + s( j ) }, { "k" }, u() } ) );
    members.push_back( detail::path_gadget(
            "F_0", "f", "0", { { "k" }, { "m" }, { "q0" }, { "k" }, { "m" }, { "q1" }, { "k" }, u() } ) );
    members.push_back( detail::path_gadget( "F_1", "f", "1", { { "k" }, { "q2" }, { "q3" }, { "k" }, u() } ) );
    members.push_back( detail::path_gadget(
            "F_2", "f", "2", { { "k" }, { "q2" }, { "q0" }, { "z" }, { "q1" }, { "z" }, { "q3" }, { "k" }, u() } ) );
    for ( std::size_t j = 0; j < m; ++j )
        members.push_back( detail::path_gadget( "G_" + s( j ), "g", s( j ),
                                                { { "k" },
                                                  { "y" + s( j ) },
                                                  { "z", dir::forward },
                                                  { "z" },
                                                  { "y" + s( j ) },
                                                  { "w" + s( j ) },
                                                  { "k" },
                                                  u() } ) );
    for ( std::size_t l = 0; l < 3 * m; ++l )
        members.push_back( detail::path_gadget( "D_" + s( l ), "d", s( l ),
                                                { { "k" },
                                                  { "p" + s( l ) },
                                                  { "z", dir::forward },
                                                  { "z" },
                                                  { "p" + s( l ) },
                                                  { "a" + s( l ) },
                                                  { "k" },
                                                  u() } ) );
    for ( std::size_t i = 0; i < m; ++i )
    {
        const auto& X = f.clauses[i];
        const auto a0 = "a" + s( 3 * i ), a1 = "a" + s( 3 * i + 1 ), a2 = "a" + s( 3 * i + 2 );
        auto near = "v" + s( 4 * i ), far = "w" + s( i );
        if ( sigma == sigma_class::sigma2 )
            std::swap( near, far );
        members.push_back( detail::path_gadget( "T_" + s( i ) + "_0", "t", s( i ) + ",0",
                                                { { "k" },
                                                  { near },
                                                  { a0 },
                                                  { X[0] },
                                                  { X[0], dir::backward },
                                                  { a0 },
                                                  { a1 },
                                                  { X[1] },
                                                  { X[1], dir::backward },
                                                  { a1 },
                                                  { a2 },
                                                  { X[2] },
                                                  { X[2], dir::backward },
                                                  { a2 },
                                                  { far },
                                                  { "k" },
                                                  u() } ) );
        members.push_back( detail::path_gadget( "T_" + s( i ) + "_1", "t", s( i ) + ",1",
                                                { { X[0] }, { "v" + s( 4 * i + 1 ) }, { X[1] }, u() } ) );
        members.push_back( detail::path_gadget( "T_" + s( i ) + "_2", "t", s( i ) + ",2",
                                                { { X[0] }, { "v" + s( 4 * i + 2 ) }, { X[2] }, u() } ) );
        members.push_back( detail::path_gadget( "T_" + s( i ) + "_3", "t", s( i ) + ",3",
                                                { { X[1] }, { "v" + s( 4 * i + 3 ) }, { X[2] }, u() } ) );
    }
    g.u = ts_union( std::move( members ) );
    return g;
}

struct gadget_instance
{
    gadget_union gadgets;
    joined_ts joined;

    [[nodiscard]] const transition_system& ts() const { return joined.ts; }
};

inline gadget_instance build_instance( const cubic_cnf& f, sigma_class sigma )
{
    gadget_instance out{ build_union( f, sigma ), {} };
    out.joined = join( out.gadgets.u );
    return out;
}

struct condition13_report
{
    bool precondition = true;          // the region inhibits k at h_{0,2}
    std::string precondition_detail;
    std::vector<std::string> violations;

    [[nodiscard]] bool ok() const { return precondition && violations.empty(); }
};

// The forced signatures of a region inhibiting k at h_{0,2}: V is swapped,
// W and Acc are not, and either sig(k)=free with sup(h_{0,2})=1 or
// sig(k)=used with sup(h_{0,2})=0.
inline condition13_report verify_condition13( const transition_system& ts, const region& r, const gadget_roles& roles )
{
    require_domain( ts, r );
    condition13_report rep;
    const auto k = ts.event( roles.k );
    const auto h = ts.state( roles.h02 );
    if ( !inhibits( r, k, h ) )
    {
        rep.precondition = false;
        rep.precondition_detail = "region does not inhibit " + roles.k + " at " + roles.h02 + " (sig=" +
                                  std::string( name_of( r.signature[k] ) ) + ", sup=" + ( r.support[h] ? "1" : "0" ) + ")";
        return rep;
    }
    for ( const auto& v : roles.V )
        if ( r.signature[ts.event( v )] != interaction::swap )
            rep.violations.push_back( "V: sig(" + v + ") = " + std::string( name_of( r.signature[ts.event( v )] ) ) + ", not swap" );
    for ( const auto* set : { &roles.W, &roles.Acc } )
        for ( const auto& e : *set )
            if ( r.signature[ts.event( e )] == interaction::swap )
                rep.violations.push_back( std::string( set == &roles.W ? "W" : "Acc" ) + ": sig(" + e + ") = swap" );
    const auto sk = r.signature[k];
    const bool sup = r.support[h];
    if ( !( ( sk == interaction::free && sup ) || ( sk == interaction::used && !sup ) ) )
        rep.violations.push_back( "k: sig(" + roles.k + ") = " + std::string( name_of( sk ) ) + " with sup(" + roles.h02 +
                                  ") = " + ( sup ? "1" : "0" ) );
    return rep;
}

// Reads the model off a region that passes verify_condition13:
// set-signed variables, except res-signed ones under sigma2 with sig(k)=free.
// Throws falsification_error if the result is not a one-in-three model.
inline std::vector<std::string> extract_model( const transition_system& ts, const region& r, const gadget_roles& roles )
{
    const auto rep = verify_condition13( ts, r, roles );
    if ( !rep.precondition )
        throw invalid_input( rep.precondition_detail );
    if ( !rep.ok() )
        throw invalid_input( "region violates the forced signatures: " + rep.violations.front() );
    auto marker = interaction::set;
    if ( roles.sigma == sigma_class::sigma2 && r.signature[ts.event( roles.k )] == interaction::free )
        marker = interaction::res;
    std::vector<std::string> model;
    for ( const auto& x : roles.formula.variables )
        if ( r.signature[ts.event( x )] == marker )
            model.push_back( x );
    if ( !is_one_in_three( roles.formula, model ) )
    {
        std::string names;
        for ( const auto& x : model )
            names += ( names.empty() ? "" : " " ) + x;
        throw falsification_error( "extracted variables {" + names + "} are not a one-in-three model" );
    }
    return model;
}

// Instance files are TS files (one block for the joined instance, one per
// member for a raw union) followed by role comments:
//   # role sigma = 1|2
//   # role k = <event>
//   # role h02 = <state>
//   # role V = <events...>   (likewise W, Acc)
//   # role clause = <x> <y> <z>   (one line per clause, in order)
inline std::string write_roles( const gadget_roles& roles )
{
    auto list = []( const std::vector<std::string>& xs ) {
        std::string out;
        for ( const auto& x : xs )
            out += " " + x;
        return out;
    };
    std::string out;
    out += std::string( "# role sigma = " ) + ( roles.sigma == sigma_class::sigma1 ? "1" : "2" ) + "\n";
    out += "# role k = " + roles.k + "\n";
    out += "# role h02 = " + roles.h02 + "\n";
    out += "# role V =" + list( roles.V ) + "\n";
    out += "# role W =" + list( roles.W ) + "\n";
    out += "# role Acc =" + list( roles.Acc ) + "\n";
    for ( const auto& c : roles.formula.clauses )
        out += "# role clause = " + c[0] + " " + c[1] + " " + c[2] + "\n";
    return out;
}

inline std::string write_instance( const gadget_instance& inst )
{
    return write_ts( inst.ts() ) + write_roles( inst.gadgets.roles );
}

inline std::string write_union_instance( const gadget_union& g )
{
    std::string out;
    for ( const auto& member : g.u.members() )
        out += write_ts( member );
    return out + write_roles( g.roles );
}

struct instance_file
{
    std::vector<transition_system> members;
    gadget_roles roles;

    // The system regions are computed on: the single TS, or the members side by side.
    [[nodiscard]] transition_system subject() const
    {
        if ( members.size() == 1 )
            return members.front();
        return ts_union( members ).flat();
    }
};

inline gadget_roles parse_roles( std::string_view content )
{
    gadget_roles roles;
    std::vector<std::vector<std::string>> clauses;
    std::vector<std::size_t> lines;
    bool have_sigma = false;
    for ( const auto& l : text::split_lines( content ) )
    {
        if ( !l.tokens.empty() )
            continue;
        std::istringstream in( l.comment );
        std::vector<std::string> t;
        for ( std::string tok; in >> tok; )
            t.push_back( tok );
        if ( t.size() < 3 || t[0] != "role" || t[2] != "=" )
            continue;
        const auto& key = t[1];
        std::vector<std::string> values( t.begin() + 3, t.end() );
        auto single = [&]() {
            if ( values.size() != 1 )
                throw parse_error( "role '" + key + "' expects one value", l.number );
            return values.front();
        };
        if ( key == "sigma" )
        {
            const auto v = single();
            if ( v != "1" && v != "2" )
                throw parse_error( "role sigma must be 1 or 2", l.number );
            roles.sigma = v == "1" ? sigma_class::sigma1 : sigma_class::sigma2;
            have_sigma = true;
        }
        else if ( key == "k" )
            roles.k = single();
        else if ( key == "h02" )
            roles.h02 = single();
        else if ( key == "V" )
            roles.V = values;
        else if ( key == "W" )
            roles.W = values;
        else if ( key == "Acc" )
            roles.Acc = values;
        else if ( key == "clause" )
        {
            clauses.push_back( values );
            lines.push_back( l.number );
        }
        else
            throw parse_error( "unknown role '" + key + "'", l.number );
    }
    if ( !have_sigma )
        throw parse_error( "instance file lacks the '# role sigma' line" );
    roles.formula = validate_cnf( clauses, lines );
    return roles;
}

inline instance_file parse_instance( std::string_view content )
{
    instance_file out;
    for ( const auto& spec : parse_ts_blocks( content ) )
    {
        try
        {
            out.members.push_back( transition_system::from_spec( spec ) );
        }
        catch ( const invalid_input& e )
        {
            throw parse_error( e.what() );
        }
    }
    if ( out.members.empty() )
        throw parse_error( "instance file holds no transition system" );
    out.roles = parse_roles( content );
    return out;
}

inline instance_file read_instance_file( const std::string& path )
{
    return parse_instance( text::read_file( path ) );
}

} // namespace bpn
