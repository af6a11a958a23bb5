#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bpn/region.hpp"
#include "bpn/separation.hpp"
#include "bpn/text.hpp"

namespace bpn
{

// Witness file, one record per atom:
//   region
//   sup <state> <bit>          (every state)
//   sig <event> <interaction>  (every event)
//   atom sp <s> <s'>  |  atom essp <e> <s>
struct witness_record
{
    region r;
    std::optional<separation_atom> atom;
    std::size_t line = 0;
};

inline std::string write_witness( const transition_system& ts, const region& r, const std::optional<separation_atom>& atom )
{
    require_domain( ts, r );
    std::string out = "region\n";
    for ( state_id s = 0; s < ts.num_states(); ++s )
        out += "sup " + ts.state_name( s ) + ( r.support[s] ? " 1\n" : " 0\n" );
    for ( event_id e = 0; e < ts.num_events(); ++e )
        out += "sig " + ts.event_name( e ) + " " + std::string( name_of( r.signature[e] ) ) + "\n";
    if ( atom )
        out += "atom " + describe( ts, *atom ) + "\n";
    return out;
}

// One record per atom of the list that the result's regions solve.
inline std::string write_witnesses( const transition_system& ts, const separation_result& result,
                                    const std::vector<separation_atom>& atoms )
{
    std::string out;
    for ( const auto& atom : atoms )
        if ( auto k = result.witness_index( atom ) )
            out += write_witness( ts, result.regions[*k], atom );
    return out;
}

inline std::vector<witness_record> parse_witnesses( const transition_system& ts, std::string_view content )
{
    struct raw
    {
        std::map<std::string, bool> sup;
        std::map<std::string, interaction> sig;
        std::optional<separation_atom> atom;
        std::size_t line;
    };
    std::vector<raw> records;
    for ( const auto& l : text::split_lines( content ) )
    {
        if ( l.tokens.empty() )
            continue;
        const auto& kw = l.tokens.front();
        if ( kw == "region" )
        {
            text::expect_arity( l, 1 );
            records.push_back( { {}, {}, std::nullopt, l.number } );
            continue;
        }
        if ( records.empty() )
            throw parse_error( "'" + kw + "' outside of a region record", l.number );
        auto& rec = records.back();
        auto state = [&]( const std::string& name ) {
            auto s = ts.find_state( name );
            if ( !s )
                throw parse_error( "unknown state '" + name + "'", l.number );
            return *s;
        };
        auto event = [&]( const std::string& name ) {
            auto e = ts.find_event( name );
            if ( !e )
                throw parse_error( "unknown event '" + name + "'", l.number );
            return *e;
        };
        if ( kw == "sup" )
        {
            text::expect_arity( l, 3 );
            (void)state( l.tokens[1] );
            if ( !rec.sup.emplace( l.tokens[1], text::parse_bit( l.tokens[2], l.number ) ).second )
                throw parse_error( "support of '" + l.tokens[1] + "' given twice", l.number );
        }
        else if ( kw == "sig" )
        {
            text::expect_arity( l, 3 );
            (void)event( l.tokens[1] );
            auto i = interaction_from_name( l.tokens[2] );
            if ( !i )
                throw parse_error( "unknown interaction '" + l.tokens[2] + "'", l.number );
            if ( !rec.sig.emplace( l.tokens[1], *i ).second )
                throw parse_error( "signature of '" + l.tokens[1] + "' given twice", l.number );
        }
        else if ( kw == "atom" )
        {
            text::expect_arity( l, 4 );
            if ( rec.atom )
                throw parse_error( "record has two atoms", l.number );
            if ( l.tokens[1] == "sp" )
                rec.atom = state_pair{ state( l.tokens[2] ), state( l.tokens[3] ) };
            else if ( l.tokens[1] == "essp" )
                rec.atom = event_state{ event( l.tokens[2] ), state( l.tokens[3] ) };
            else
                throw parse_error( "atom kind must be 'sp' or 'essp'", l.number );
        }
        else
            throw parse_error( "unknown directive '" + kw + "'", l.number );
    }
    std::vector<witness_record> out;
    for ( auto& rec : records )
    {
        try
        {
            out.push_back( { region_from_names( ts, rec.sup, rec.sig ), rec.atom, rec.line } );
        }
        catch ( const domain_mismatch& e )
        {
            throw parse_error( e.what(), rec.line );
        }
    }
    return out;
}

} // namespace bpn
