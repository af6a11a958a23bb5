#pragma once

#include <array>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bpn/transition_system.hpp"

namespace bpn
{

// A collection of transition systems with pairwise disjoint state names.
// Events may be shared. The flattened view puts all members side by side in
// one (generally non-reachable) transition system, which is what regions of a
// union are defined over.
class ts_union
{
    std::vector<transition_system> _members;
    transition_system _flat;
    std::vector<std::size_t> _member_of;
    std::vector<state_id> _offset;

public:
    ts_union() = default;

    explicit ts_union( std::vector<transition_system> members ) : _members{ std::move( members ) }
    {
        std::vector<std::string> states, events;
        std::unordered_set<std::string> seen_states, seen_events;
        std::vector<arc> arcs;
        for ( std::size_t i = 0; i < _members.size(); ++i )
        {
            const auto& m = _members[i];
            _offset.push_back( static_cast<state_id>( states.size() ) );
            for ( const auto& s : m.states() )
            {
                if ( !seen_states.insert( s ).second )
                    throw invalid_input( "union members share state name '" + s + "' (member " + std::to_string( i ) + ")" );
                states.push_back( s );
                _member_of.push_back( i );
            }
            for ( const auto& e : m.events() )
                if ( seen_events.insert( e ).second )
                    events.push_back( e );
        }
        std::unordered_map<std::string, event_id> eidx;
        for ( event_id e = 0; e < events.size(); ++e )
            eidx.emplace( events[e], e );
        for ( std::size_t i = 0; i < _members.size(); ++i )
            for ( const auto& a : _members[i].arcs() )
                arcs.push_back( { _offset[i] + a.src, eidx.at( _members[i].event_name( a.ev ) ), _offset[i] + a.dst } );
        if ( !states.empty() )
            _flat = transition_system( "union", std::move( states ), std::move( events ), std::move( arcs ),
                                       _offset.front() + _members.front().initial() );
    }

    // Renames every state to "<memberIndex>:<name>" so that arbitrary
    // transition systems can be combined.
    static ts_union namespaced( const std::vector<transition_system>& members )
    {
        std::vector<transition_system> renamed;
        for ( std::size_t i = 0; i < members.size(); ++i )
        {
            const auto& m = members[i];
            std::vector<std::string> states;
            for ( const auto& s : m.states() )
                states.push_back( std::to_string( i ) + ":" + s );
            renamed.emplace_back( m.name(), std::move( states ), m.events(), m.arcs(), m.initial() );
        }
        return ts_union( std::move( renamed ) );
    }

    [[nodiscard]] bool empty() const { return _members.empty(); }
    [[nodiscard]] std::size_t size() const { return _members.size(); }
    [[nodiscard]] const std::vector<transition_system>& members() const { return _members; }
    [[nodiscard]] const transition_system& member( std::size_t i ) const { return _members.at( i ); }

    // All members side by side; the initial state is member 0's.
    [[nodiscard]] const transition_system& flat() const { return _flat; }
    [[nodiscard]] std::size_t member_of( state_id flat_state ) const { return _member_of.at( flat_state ); }
    [[nodiscard]] state_id offset( std::size_t member ) const { return _offset.at( member ); }
    [[nodiscard]] state_id flat_initial( std::size_t member ) const { return _offset.at( member ) + _members.at( member ).initial(); }
};

// The joining A(U): members glued along a backbone of connector states.
// For member i (0-based) with initial state s:
//
//   bot_{4i} <-otimes_i-> bot_{4i+1} -odot_i-> bot_{4i+2} <-odot_i-> bot_{4i+3} <-otimes_i-> bot_{4i+4}
//   bot_{4i+2} -ominus_i-> top_{i,1} <-ominus_i-> top_{i,2} <-odot_i-> top_{i,3} <-oplus_i-> s
struct joined_ts
{
    transition_system ts;
    std::vector<std::string> bottom;                   // bot_0 .. bot_{4(n+1)}
    std::vector<std::array<std::string, 3>> top;       // top_{i,1..3}
    std::vector<std::string> odot, otimes, ominus, oplus;

    [[nodiscard]] std::size_t connector_count() const { return bottom.size() + 3 * top.size(); }
    [[nodiscard]] std::size_t fresh_event_count() const { return odot.size() + otimes.size() + ominus.size() + oplus.size(); }
};

inline joined_ts join( const ts_union& u )
{
    if ( u.empty() )
        throw invalid_input( "cannot join an empty union" );
    const auto& flat = u.flat();
    const std::size_t n1 = u.size();

    // Pick a prefix decoration that keeps every generated name fresh.
    std::set<std::string> taken( flat.states().begin(), flat.states().end() );
    taken.insert( flat.events().begin(), flat.events().end() );
    std::string mark;
    auto clashes = [&]( const std::string& m ) {
        for ( std::size_t i = 0; i < n1; ++i )
            for ( const char* base : { "odot_", "otimes_", "ominus_", "oplus_" } )
                if ( taken.contains( base + m + std::to_string( i ) ) )
                    return true;
        for ( std::size_t i = 0; i < n1; ++i )
            for ( int k = 1; k <= 3; ++k )
                if ( taken.contains( "top_" + m + std::to_string( i ) + "_" + std::to_string( k ) ) )
                    return true;
        for ( std::size_t k = 0; k <= 4 * n1; ++k )
            if ( taken.contains( "bot_" + m + std::to_string( k ) ) )
                return true;
        return false;
    };
    while ( clashes( mark ) )
        mark += "_";

    joined_ts out;
    std::vector<std::string> states, events;
    for ( std::size_t k = 0; k <= 4 * n1; ++k )
        out.bottom.push_back( "bot_" + mark + std::to_string( k ) );
    for ( std::size_t i = 0; i < n1; ++i )
    {
        auto idx = mark + std::to_string( i );
        out.top.push_back( { "top_" + idx + "_1", "top_" + idx + "_2", "top_" + idx + "_3" } );
        out.odot.push_back( "odot_" + idx );
        out.otimes.push_back( "otimes_" + idx );
        out.ominus.push_back( "ominus_" + idx );
        out.oplus.push_back( "oplus_" + idx );
    }
    states = out.bottom;
    for ( const auto& t : out.top )
        states.insert( states.end(), t.begin(), t.end() );
    const auto member_base = static_cast<state_id>( states.size() );
    states.insert( states.end(), flat.states().begin(), flat.states().end() );

    events = flat.events();
    const auto fresh_base = static_cast<event_id>( events.size() );
    for ( std::size_t i = 0; i < n1; ++i )
        for ( const auto* v : { &out.odot, &out.otimes, &out.ominus, &out.oplus } )
            events.push_back( ( *v )[i] );

    std::vector<arc> arcs;
    for ( const auto& a : flat.arcs() )
        arcs.push_back( { member_base + a.src, a.ev, member_base + a.dst } );
    auto bot = [&]( std::size_t k ) { return static_cast<state_id>( k ); };
    auto top = [&]( std::size_t i, int k ) { return static_cast<state_id>( out.bottom.size() + 3 * i + ( k - 1 ) ); };
    auto one = [&]( state_id s, event_id e, state_id t ) { arcs.push_back( { s, e, t } ); };
    auto both = [&]( state_id s, event_id e, state_id t ) {
        one( s, e, t );
        one( t, e, s );
    };
    for ( std::size_t i = 0; i < n1; ++i )
    {
        const auto odot = fresh_base + static_cast<event_id>( 4 * i );
        const auto otimes = odot + 1, ominus = odot + 2, oplus = odot + 3;
        both( bot( 4 * i ), otimes, bot( 4 * i + 1 ) );
        one( bot( 4 * i + 1 ), odot, bot( 4 * i + 2 ) );
        both( bot( 4 * i + 2 ), odot, bot( 4 * i + 3 ) );
        both( bot( 4 * i + 3 ), otimes, bot( 4 * i + 4 ) );
        one( bot( 4 * i + 2 ), ominus, top( i, 1 ) );
        both( top( i, 1 ), ominus, top( i, 2 ) );
        both( top( i, 2 ), odot, top( i, 3 ) );
        both( top( i, 3 ), oplus, member_base + u.flat_initial( i ) );
    }
    out.ts = transition_system( "join", std::move( states ), std::move( events ), std::move( arcs ), bot( 0 ) );
    return out;
}

struct join_report
{
    std::vector<std::string> ubiquitous_events;   // item 1 violations
    std::vector<std::string> member_issues;       // item 2 violations, one line each

    [[nodiscard]] bool ok() const { return ubiquitous_events.empty() && member_issues.empty(); }
};

// (1) every event misses some state of S(U); (2) each member's initial state
// has exactly one outgoing and one incoming arc, both labeled with one event
// that labels no other arc anywhere in the union.
inline join_report check_join_preconditions( const ts_union& u )
{
    join_report report;
    const auto& flat = u.flat();
    std::vector<std::size_t> occurrences( flat.num_events(), 0 );
    std::vector<std::size_t> arcs_per_event( flat.num_events(), 0 );
    for ( const auto& a : flat.arcs() )
        ++arcs_per_event[a.ev];
    for ( state_id s = 0; s < flat.num_states(); ++s )
        for ( const auto& a : flat.out_arcs( s ) )
            ++occurrences[a.ev];
    for ( event_id e = 0; e < flat.num_events(); ++e )
        if ( occurrences[e] == flat.num_states() )
            report.ubiquitous_events.push_back( flat.event_name( e ) );

    for ( std::size_t i = 0; i < u.size(); ++i )
    {
        const state_id s0 = u.flat_initial( i );
        std::vector<arc> out, in;
        for ( const auto& a : flat.arcs() )
        {
            if ( a.src == s0 )
                out.push_back( a );
            if ( a.dst == s0 )
                in.push_back( a );
        }
        const auto label = "member " + std::to_string( i ) + " (" + u.member( i ).name() + ")";
        if ( out.size() != 1 || in.size() != 1 )
        {
            report.member_issues.push_back( label + ": initial state has " + std::to_string( out.size() ) + " outgoing and " +
                                            std::to_string( in.size() ) + " incoming arcs" );
            continue;
        }
        if ( out.front().ev != in.front().ev )
        {
            report.member_issues.push_back( label + ": initial arcs carry different events" );
            continue;
        }
        const auto e = out.front().ev;
        const std::size_t expected = out.front() == in.front() ? 1 : 2;
        if ( arcs_per_event[e] != expected )
            report.member_issues.push_back( label + ": event " + flat.event_name( e ) + " is not unique to the initial state" );
    }
    return report;
}

} // namespace bpn
