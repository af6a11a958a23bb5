#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bpn/error.hpp"
#include "bpn/sat/solver.hpp"
#include "bpn/text.hpp"

namespace bpn::sat
{

// A clause set kept outside a solver, for exchange with external tools.
struct cnf
{
    std::size_t num_vars = 0;
    std::vector<std::vector<lit>> clauses;

    void add( std::vector<lit> c )
    {
        for ( auto l : c )
            if ( static_cast<std::size_t>( l.variable() ) >= num_vars )
                num_vars = static_cast<std::size_t>( l.variable() ) + 1;
        clauses.push_back( std::move( c ) );
    }
};

inline int to_dimacs( lit l )
{
    return l.negated() ? -( l.variable() + 1 ) : l.variable() + 1;
}

inline lit from_dimacs( long v )
{
    return v < 0 ? neg( static_cast<var>( -v - 1 ) ) : pos( static_cast<var>( v - 1 ) );
}

inline std::string write_dimacs( const cnf& f, const std::vector<std::string>& comments = {} )
{
    std::string out;
    for ( const auto& c : comments )
        out += "c " + c + "\n";
    out += "p cnf " + std::to_string( f.num_vars ) + " " + std::to_string( f.clauses.size() ) + "\n";
    for ( const auto& c : f.clauses )
    {
        for ( auto l : c )
            out += std::to_string( to_dimacs( l ) ) + " ";
        out += "0\n";
    }
    return out;
}

inline long parse_long( const std::string& tok, std::size_t line )
{
    try
    {
        std::size_t used = 0;
        long v = std::stol( tok, &used );
        if ( used != tok.size() )
            throw parse_error( "not an integer: '" + tok + "'", line );
        return v;
    }
    catch ( const std::logic_error& )
    {
        throw parse_error( "not an integer: '" + tok + "'", line );
    }
}

inline cnf parse_dimacs( std::string_view content )
{
    cnf f;
    bool header = false;
    std::size_t declared_clauses = 0;
    std::vector<lit> current;
    for ( const auto& l : text::split_lines( content ) )
    {
        if ( l.tokens.empty() || l.tokens.front() == "c" || l.tokens.front().starts_with( "c" ) )
            continue;
        if ( l.tokens.front() == "p" )
        {
            if ( header )
                throw parse_error( "second problem line", l.number );
            if ( l.tokens.size() != 4 || l.tokens[1] != "cnf" )
                throw parse_error( "expected 'p cnf <vars> <clauses>'", l.number );
            f.num_vars = static_cast<std::size_t>( parse_long( l.tokens[2], l.number ) );
            declared_clauses = static_cast<std::size_t>( parse_long( l.tokens[3], l.number ) );
            header = true;
            continue;
        }
        if ( !header )
            throw parse_error( "clause before the problem line", l.number );
        for ( const auto& tok : l.tokens )
        {
            const long v = parse_long( tok, l.number );
            if ( v == 0 )
            {
                f.clauses.push_back( std::move( current ) );
                current.clear();
                continue;
            }
            if ( static_cast<std::size_t>( v < 0 ? -v : v ) > f.num_vars )
                throw parse_error( "literal " + tok + " exceeds the declared variable count", l.number );
            current.push_back( from_dimacs( v ) );
        }
    }
    if ( !current.empty() )
        f.clauses.push_back( std::move( current ) );
    if ( !header )
        throw parse_error( "missing problem line" );
    if ( f.clauses.size() != declared_clauses )
        throw parse_error( "declared " + std::to_string( declared_clauses ) + " clauses, found " +
                           std::to_string( f.clauses.size() ) );
    return f;
}

// Model line(s) as printed by common solvers: "v 1 -2 3 0", optionally after
// "s SATISFIABLE". Returns an empty vector for "s UNSATISFIABLE".
inline std::vector<bool> parse_model( std::string_view content, std::size_t num_vars )
{
    std::vector<bool> model( num_vars, false );
    bool unsat = false;
    for ( const auto& l : text::split_lines( content ) )
    {
        if ( l.tokens.empty() )
            continue;
        if ( l.tokens.front() == "s" )
        {
            unsat = l.tokens.size() > 1 && l.tokens[1] == "UNSATISFIABLE";
            continue;
        }
        std::size_t k = l.tokens.front() == "v" ? 1 : 0;
        for ( ; k < l.tokens.size(); ++k )
        {
            const long v = parse_long( l.tokens[k], l.number );
            if ( v == 0 )
                continue;
            const auto idx = static_cast<std::size_t>( ( v < 0 ? -v : v ) - 1 );
            if ( idx >= num_vars )
                throw parse_error( "model mentions variable " + std::to_string( idx + 1 ), l.number );
            model[idx] = v > 0;
        }
    }
    if ( unsat )
        return {};
    return model;
}

// Loads a clause set into a solver.
inline void load( solver& s, const cnf& f )
{
    while ( s.num_vars() < f.num_vars )
        s.new_var();
    for ( const auto& c : f.clauses )
        s.add_clause( c );
}

} // namespace bpn::sat
