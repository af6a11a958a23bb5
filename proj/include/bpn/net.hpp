#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bpn/interaction.hpp"
#include "bpn/region.hpp"
#include "bpn/separation.hpp"
#include "bpn/text.hpp"
#include "bpn/transition_system.hpp"

namespace bpn
{

using marking = std::vector<bool>;

// A boolean Petri net of a given type: places hold one bit, the flow function
// relates every place to every transition by an interaction of the type.
struct boolean_net
{
    std::string name;
    net_type type;
    std::vector<std::string> places;
    std::vector<std::string> transitions;
    marking initial;                                // per place
    std::vector<std::vector<interaction>> flow;     // [place][transition]

    [[nodiscard]] std::optional<std::size_t> find_place( std::string_view p ) const
    {
        for ( std::size_t k = 0; k < places.size(); ++k )
            if ( places[k] == p )
                return k;
        return std::nullopt;
    }

    [[nodiscard]] std::optional<std::size_t> find_transition( std::string_view t ) const
    {
        for ( std::size_t k = 0; k < transitions.size(); ++k )
            if ( transitions[k] == t )
                return k;
        return std::nullopt;
    }

    [[nodiscard]] std::size_t place( std::string_view p ) const
    {
        if ( auto k = find_place( p ) )
            return *k;
        throw domain_mismatch( "unknown place '" + std::string( p ) + "'" );
    }

    [[nodiscard]] std::size_t transition( std::string_view t ) const
    {
        if ( auto k = find_transition( t ) )
            return *k;
        throw domain_mismatch( "unknown transition '" + std::string( t ) + "'" );
    }

    friend bool operator==( const boolean_net&, const boolean_net& ) = default;
};

// Throws invalid_input unless the flow is total, within the type, and the
// marking covers every place.
inline void require_valid( const boolean_net& n )
{
    if ( n.initial.size() != n.places.size() )
        throw invalid_input( "initial marking covers " + std::to_string( n.initial.size() ) + " of " +
                             std::to_string( n.places.size() ) + " places" );
    if ( n.flow.size() != n.places.size() )
        throw invalid_input( "flow has " + std::to_string( n.flow.size() ) + " rows for " + std::to_string( n.places.size() ) +
                             " places" );
    for ( std::size_t p = 0; p < n.places.size(); ++p )
    {
        if ( n.flow[p].size() != n.transitions.size() )
            throw invalid_input( "flow of place '" + n.places[p] + "' is not total" );
        for ( std::size_t t = 0; t < n.transitions.size(); ++t )
            if ( !n.type.contains( n.flow[p][t] ) )
                throw invalid_input( "flow(" + n.places[p] + ", " + n.transitions[t] + ") = " +
                                     std::string( name_of( n.flow[p][t] ) ) + " is not in the type " + n.type.to_string() );
    }
    std::unordered_map<std::string, int> seen;
    for ( const auto& p : n.places )
        if ( ++seen[p] > 1 )
            throw invalid_input( "duplicate place '" + p + "'" );
    seen.clear();
    for ( const auto& t : n.transitions )
        if ( ++seen[t] > 1 )
            throw invalid_input( "duplicate transition '" + t + "'" );
}

inline std::optional<marking> fire( const boolean_net& n, const marking& m, std::size_t t )
{
    if ( t >= n.transitions.size() )
        throw domain_mismatch( "unknown transition index " + std::to_string( t ) );
    if ( m.size() != n.places.size() )
        throw domain_mismatch( "marking covers " + std::to_string( m.size() ) + " of " + std::to_string( n.places.size() ) +
                               " places" );
    marking next( m.size() );
    for ( std::size_t p = 0; p < m.size(); ++p )
    {
        auto bit = apply_interaction( n.flow[p][t], m[p] );
        if ( !bit )
            return std::nullopt;
        next[p] = *bit;
    }
    return next;
}

inline std::optional<marking> fire( const boolean_net& n, const marking& m, std::string_view t )
{
    return fire( n, m, n.transition( t ) );
}

inline std::string marking_name( const marking& m )
{
    if ( m.empty() )
        return "-";
    std::string out;
    for ( bool b : m )
        out += b ? '1' : '0';
    return out;
}

// Breadth-first from the initial marking, transitions in net order. States
// are named by their marking; events are the transitions that ever fire.
inline transition_system reachability_graph( const boolean_net& n )
{
    require_valid( n );
    std::map<marking, state_id> index;
    std::vector<marking> states{ n.initial };
    index.emplace( n.initial, 0 );
    std::vector<std::tuple<state_id, std::size_t, state_id>> steps;
    std::vector<bool> fires( n.transitions.size(), false );
    for ( std::size_t k = 0; k < states.size(); ++k )
        for ( std::size_t t = 0; t < n.transitions.size(); ++t )
        {
            auto next = fire( n, states[k], t );
            if ( !next )
                continue;
            auto [it, fresh] = index.emplace( *next, static_cast<state_id>( states.size() ) );
            if ( fresh )
                states.push_back( *next );
            fires[t] = true;
            steps.emplace_back( static_cast<state_id>( k ), t, it->second );
        }
    std::vector<std::string> names, events;
    for ( const auto& m : states )
        names.push_back( marking_name( m ) );
    std::vector<event_id> event_of( n.transitions.size(), 0 );
    for ( std::size_t t = 0; t < n.transitions.size(); ++t )
        if ( fires[t] )
        {
            event_of[t] = static_cast<event_id>( events.size() );
            events.push_back( n.transitions[t] );
        }
    std::vector<arc> arcs;
    for ( const auto& [s, t, d] : steps )
        arcs.push_back( { s, event_of[t], d } );
    return transition_system( n.name.empty() ? "rg" : n.name, std::move( names ), std::move( events ), std::move( arcs ), 0 );
}

// One place per distinct witness region (p0, p1, ... in order of first
// appearance), one transition per event. The witnesses must be valid regions
// that jointly solve every separation atom of the system.
inline boolean_net synthesize( const transition_system& ts, net_type type, const std::vector<region>& witnesses,
                               std::string name = {} )
{
    require_nonempty( type );
    std::vector<region> places;
    for ( const auto& r : witnesses )
    {
        if ( !validate_region( ts, type, r ) )
            throw invalid_input( "a witness is not a valid region of '" + ts.name() + "' for type " + type.to_string() );
        if ( std::find( places.begin(), places.end(), r ) == places.end() )
            places.push_back( r );
    }
    for ( const auto& atom : ssp_atoms( ts ) )
        if ( std::none_of( places.begin(), places.end(), [&]( const region& r ) { return solves( r, atom ); } ) )
            throw invalid_input( "witnesses leave atom '" + describe( ts, atom ) + "' unsolved" );
    for ( const auto& atom : essp_atoms( ts ) )
        if ( std::none_of( places.begin(), places.end(), [&]( const region& r ) { return solves( r, atom ); } ) )
            throw invalid_input( "witnesses leave atom '" + describe( ts, atom ) + "' unsolved" );

    boolean_net n;
    n.name = name.empty() ? ts.name() : std::move( name );
    n.type = type;
    n.transitions = ts.events();
    for ( std::size_t k = 0; k < places.size(); ++k )
    {
        n.places.push_back( "p" + std::to_string( k ) );
        n.initial.push_back( places[k].support[ts.initial()] );
        n.flow.push_back( places[k].signature );
    }
    return n;
}

// The unique label- and initial-state-preserving candidate, built by walking
// both systems in lockstep. Maps states of a to states of b.
inline std::optional<std::vector<state_id>> is_isomorphic( const transition_system& a, const transition_system& b )
{
    if ( !a.is_deterministic() || !b.is_deterministic() )
        throw invalid_input( "isomorphism check needs deterministic systems" );
    if ( a.num_states() != b.num_states() || a.num_events() != b.num_events() || a.arcs().size() != b.arcs().size() )
        return std::nullopt;
    std::vector<event_id> ev( a.num_events() );
    for ( event_id e = 0; e < a.num_events(); ++e )
    {
        auto f = b.find_event( a.event_name( e ) );
        if ( !f )
            return std::nullopt;
        ev[e] = *f;
    }
    constexpr state_id none = ~state_id{ 0 };
    std::vector<state_id> map( a.num_states(), none ), back( b.num_states(), none );
    std::deque<state_id> queue{ a.initial() };
    map[a.initial()] = b.initial();
    back[b.initial()] = a.initial();
    while ( !queue.empty() )
    {
        const auto s = queue.front();
        queue.pop_front();
        for ( const auto& x : a.out_arcs( s ) )
        {
            auto t = b.step( map[s], ev[x.ev] );
            if ( !t )
                return std::nullopt;
            if ( map[x.dst] == none && back[*t] == none )
            {
                map[x.dst] = *t;
                back[*t] = x.dst;
                queue.push_back( x.dst );
            }
            else if ( map[x.dst] != *t || back[*t] != x.dst )
                return std::nullopt;
        }
    }
    for ( auto m : map )
        if ( m == none )
            return std::nullopt;
    return map;
}

// Net text format:
//   net <name>
//   type <interaction,...>
//   place <name> <initial bit>
//   transition <name>
//   flow <place> <transition> <interaction>
// Every (place, transition) pair needs a flow line.
inline boolean_net parse_net( std::string_view content )
{
    boolean_net n;
    bool have_type = false;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> flow_line;
    struct pending
    {
        std::string place, transition;
        interaction value;
        std::size_t line;
    };
    std::vector<pending> flows;
    for ( const auto& l : text::split_lines( content ) )
    {
        if ( l.tokens.empty() )
            continue;
        const auto& kw = l.tokens.front();
        if ( kw == "net" )
        {
            text::expect_arity( l, 2 );
            n.name = l.tokens[1];
        }
        else if ( kw == "type" )
        {
            text::expect_arity( l, 2 );
            try
            {
                n.type = parse_net_type( l.tokens[1] );
            }
            catch ( const parse_error& e )
            {
                throw parse_error( e.what(), l.number );
            }
            have_type = true;
        }
        else if ( kw == "place" )
        {
            text::expect_arity( l, 3 );
            if ( n.find_place( l.tokens[1] ) )
                throw parse_error( "place '" + l.tokens[1] + "' declared twice", l.number );
            n.places.push_back( l.tokens[1] );
            n.initial.push_back( text::parse_bit( l.tokens[2], l.number ) );
        }
        else if ( kw == "transition" )
        {
            text::expect_arity( l, 2 );
            if ( n.find_transition( l.tokens[1] ) )
                throw parse_error( "transition '" + l.tokens[1] + "' declared twice", l.number );
            n.transitions.push_back( l.tokens[1] );
        }
        else if ( kw == "flow" )
        {
            text::expect_arity( l, 4 );
            auto i = interaction_from_name( l.tokens[3] );
            if ( !i )
                throw parse_error( "unknown interaction '" + l.tokens[3] + "'", l.number );
            flows.push_back( { l.tokens[1], l.tokens[2], *i, l.number } );
        }
        else
            throw parse_error( "unknown directive '" + kw + "'", l.number );
    }
    if ( !have_type )
        throw parse_error( "missing 'type' line" );
    n.flow.assign( n.places.size(), std::vector<interaction>( n.transitions.size(), interaction::nop ) );
    for ( const auto& f : flows )
    {
        auto p = n.find_place( f.place );
        auto t = n.find_transition( f.transition );
        if ( !p )
            throw parse_error( "flow names unknown place '" + f.place + "'", f.line );
        if ( !t )
            throw parse_error( "flow names unknown transition '" + f.transition + "'", f.line );
        if ( !flow_line.emplace( std::pair{ *p, *t }, f.line ).second )
            throw parse_error( "flow(" + f.place + ", " + f.transition + ") given twice", f.line );
        if ( !n.type.contains( f.value ) )
            throw parse_error( "interaction " + std::string( name_of( f.value ) ) + " is not in the type", f.line );
        n.flow[*p][*t] = f.value;
    }
    for ( std::size_t p = 0; p < n.places.size(); ++p )
        for ( std::size_t t = 0; t < n.transitions.size(); ++t )
            if ( !flow_line.contains( { p, t } ) )
                throw parse_error( "flow(" + n.places[p] + ", " + n.transitions[t] + ") missing; the flow must be total" );
    return n;
}

inline boolean_net read_net_file( const std::string& path )
{
    return parse_net( text::read_file( path ) );
}

inline std::string write_net( const boolean_net& n )
{
    std::string out = "net " + ( n.name.empty() ? std::string( "N" ) : n.name ) + "\n";
    out += "type " + n.type.to_string() + "\n";
    for ( std::size_t p = 0; p < n.places.size(); ++p )
        out += "place " + n.places[p] + " " + ( n.initial[p] ? "1" : "0" ) + "\n";
    for ( const auto& t : n.transitions )
        out += "transition " + t + "\n";
    for ( std::size_t p = 0; p < n.places.size(); ++p )
        for ( std::size_t t = 0; t < n.transitions.size(); ++t )
            out += "flow " + n.places[p] + " " + n.transitions[t] + " " + std::string( name_of( n.flow[p][t] ) ) + "\n";
    return out;
}

} // namespace bpn
