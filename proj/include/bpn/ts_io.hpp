#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bpn/text.hpp"
#include "bpn/transition_system.hpp"

namespace bpn
{

// Transition system text format, one directive per line:
//
//   ts <name>
//   init <state>
//   arc <state> <event> <state>
//
// '#' starts a comment. A file may hold several `ts` blocks (a union). The
// reader also accepts `state <name>` and `event <name>` to declare items that
// label no arc; the writer only emits them when needed.
inline std::vector<ts_spec> parse_ts_blocks( std::string_view content )
{
    std::vector<ts_spec> blocks;
    std::vector<std::set<std::string>> seen_states, seen_events;
    auto current = [&]() -> ts_spec& {
        if ( blocks.empty() )
        {
            blocks.emplace_back();
            seen_states.emplace_back();
            seen_events.emplace_back();
        }
        return blocks.back();
    };
    auto declare_state = [&]( const std::string& s ) {
        if ( seen_states.back().insert( s ).second )
            blocks.back().states.push_back( s );
    };
    auto declare_event = [&]( const std::string& e ) {
        if ( seen_events.back().insert( e ).second )
            blocks.back().events.push_back( e );
    };

    for ( const auto& l : text::split_lines( content ) )
    {
        if ( l.tokens.empty() )
            continue;
        const auto& kw = l.tokens.front();
        if ( kw == "ts" )
        {
            text::expect_arity( l, 2 );
            blocks.emplace_back();
            seen_states.emplace_back();
            seen_events.emplace_back();
            blocks.back().name = l.tokens[1];
        }
        else if ( kw == "init" )
        {
            text::expect_arity( l, 2 );
            auto& b = current();
            if ( b.initial )
                throw parse_error( "initial state given twice", l.number );
            b.initial = l.tokens[1];
            declare_state( l.tokens[1] );
        }
        else if ( kw == "arc" )
        {
            text::expect_arity( l, 4 );
            auto& b = current();
            declare_state( l.tokens[1] );
            declare_event( l.tokens[2] );
            declare_state( l.tokens[3] );
            b.arcs.push_back( { l.tokens[1], l.tokens[2], l.tokens[3], l.number } );
        }
        else if ( kw == "state" )
        {
            text::expect_arity( l, 2 );
            current();
            declare_state( l.tokens[1] );
        }
        else if ( kw == "event" )
        {
            text::expect_arity( l, 2 );
            current();
            declare_event( l.tokens[1] );
        }
        else
            throw parse_error( "unknown directive '" + kw + "'", l.number );
    }
    return blocks;
}

// Parses exactly one transition system and checks it structurally.
inline transition_system parse_ts( std::string_view content )
{
    auto blocks = parse_ts_blocks( content );
    if ( blocks.size() != 1 )
        throw parse_error( "expected exactly one transition system, found " + std::to_string( blocks.size() ) );
    try
    {
        return transition_system::from_spec( blocks.front() );
    }
    catch ( const invalid_input& e )
    {
        throw parse_error( e.what() );
    }
}

inline transition_system read_ts_file( const std::string& path )
{
    return parse_ts( text::read_file( path ) );
}

inline std::string write_ts( const transition_system& ts )
{
    std::string out = "ts " + ( ts.name().empty() ? std::string( "A" ) : ts.name() ) + "\n";
    out += "init " + ts.state_name( ts.initial() ) + "\n";
    std::vector<bool> state_mentioned( ts.num_states(), false ), event_mentioned( ts.num_events(), false );
    state_mentioned[ts.initial()] = true;
    for ( const auto& a : ts.arcs() )
        state_mentioned[a.src] = state_mentioned[a.dst] = event_mentioned[a.ev] = true;
    for ( state_id s = 0; s < ts.num_states(); ++s )
        if ( !state_mentioned[s] )
            out += "state " + ts.state_name( s ) + "\n";
    for ( event_id e = 0; e < ts.num_events(); ++e )
        if ( !event_mentioned[e] )
            out += "event " + ts.event_name( e ) + "\n";
    for ( const auto& a : ts.arcs() )
        out += "arc " + ts.state_name( a.src ) + " " + ts.event_name( a.ev ) + " " + ts.state_name( a.dst ) + "\n";
    return out;
}

} // namespace bpn
