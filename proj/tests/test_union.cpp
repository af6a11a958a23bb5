#include <gtest/gtest.h>

#include <random>

#include "bpn/separation.hpp"
#include "bpn/union.hpp"
#include "fixtures.hpp"

using namespace bpn;

namespace
{

transition_system gated( const std::string& tag, const std::string& u )
{
    return ts_builder( tag ).initial( tag + "0" ).both( tag + "0", u, tag + "1" ).arc( tag + "1", "a", tag + "2" ).build();
}

} // namespace

TEST( Union, FlatKeepsMembersApart )
{
    ts_union u( { gated( "p", "u_0" ), gated( "q", "u_1" ) } );
    EXPECT_EQ( u.size(), 2u );
    EXPECT_EQ( u.flat().num_states(), 6u );
    EXPECT_EQ( u.flat().num_events(), 3u );
    EXPECT_EQ( u.member_of( u.flat().state( "q2" ) ), 1u );
    EXPECT_EQ( u.flat_initial( 1 ), u.flat().state( "q0" ) );
    EXPECT_THROW( ts_union( { fixtures::a1(), fixtures::a2() } ), invalid_input );
    auto ns = ts_union::namespaced( { fixtures::a1(), fixtures::a2() } );
    EXPECT_TRUE( ns.flat().find_state( "1:s2" ) );
}

TEST( Union, SeparationAtomsStayInsideMembers )
{
    ts_union u( { gated( "p", "u_0" ), gated( "q", "u_1" ) } );
    // 3 pairs per member; ESSP atoms range over the whole flat system.
    EXPECT_EQ( ssp_atoms( u ).size(), 6u );
    std::size_t essp = 0;
    const auto& f = u.flat();
    for ( event_id e = 0; e < f.num_events(); ++e )
        for ( state_id s = 0; s < f.num_states(); ++s )
            essp += f.occurs( e, s ) ? 0 : 1;
    EXPECT_EQ( essp_atoms( u ).size(), essp );
}

TEST( Join, SingleMemberCounts )
{
    auto j = join( ts_union( { fixtures::a1() } ) );
    EXPECT_EQ( j.connector_count(), 8u );
    EXPECT_EQ( j.fresh_event_count(), 4u );
    EXPECT_EQ( j.ts.num_states(), 11u );
    EXPECT_EQ( j.ts.num_events(), 5u );
    EXPECT_EQ( j.ts.state_name( j.ts.initial() ), "bot_0" );
    EXPECT_TRUE( validate_ts( j.ts ).ok() ) << validate_ts( j.ts ).to_string();
}

TEST( Join, BackboneShape )
{
    ts_union u( { gated( "p", "u_0" ), gated( "q", "u_1" ), gated( "r", "u_2" ) } );
    auto j = join( u );
    EXPECT_EQ( j.connector_count(), 22u );
    EXPECT_EQ( j.bottom.size(), 13u );
    const auto& t = j.ts;
    auto has = [&]( const std::string& s, const std::string& e, const std::string& d ) {
        return t.has_arc( t.state( s ), t.event( e ), t.state( d ) );
    };
    for ( int i = 0; i < 3; ++i )
    {
        const auto I = std::to_string( i );
        auto bot = [&]( int k ) { return "bot_" + std::to_string( 4 * i + k ); };
        EXPECT_TRUE( has( bot( 0 ), "otimes_" + I, bot( 1 ) ) && has( bot( 1 ), "otimes_" + I, bot( 0 ) ) );
        EXPECT_TRUE( has( bot( 1 ), "odot_" + I, bot( 2 ) ) );
        EXPECT_FALSE( has( bot( 2 ), "odot_" + I, bot( 1 ) ) );
        EXPECT_TRUE( has( bot( 2 ), "odot_" + I, bot( 3 ) ) && has( bot( 3 ), "odot_" + I, bot( 2 ) ) );
        EXPECT_TRUE( has( bot( 3 ), "otimes_" + I, bot( 4 ) ) && has( bot( 4 ), "otimes_" + I, bot( 3 ) ) );
        EXPECT_TRUE( has( bot( 2 ), "ominus_" + I, "top_" + I + "_1" ) );
        EXPECT_FALSE( has( "top_" + I + "_1", "ominus_" + I, bot( 2 ) ) );
        EXPECT_TRUE( has( "top_" + I + "_1", "ominus_" + I, "top_" + I + "_2" ) );
        EXPECT_TRUE( has( "top_" + I + "_2", "odot_" + I, "top_" + I + "_3" ) );
        const std::string init = std::string( 1, "pqr"[i] ) + "0";
        EXPECT_TRUE( has( "top_" + I + "_3", "oplus_" + I, init ) && has( init, "oplus_" + I, "top_" + I + "_3" ) );
    }
    EXPECT_TRUE( validate_ts( t ).ok() );
}

TEST( Join, FreshNamesAvoidCollisions )
{
    auto m = ts_builder( "m" ).initial( "bot_0" ).both( "bot_0", "odot_0", "x" ).build();
    auto j = join( ts_union( { m } ) );
    EXPECT_EQ( j.bottom.front(), "bot__0" );
    EXPECT_EQ( j.odot.front(), "odot__0" );
    EXPECT_EQ( j.ts.num_states(), 10u );
    EXPECT_THROW( join( ts_union{} ), invalid_input );
}

TEST( JoinPreconditions, DetectsViolations )
{
    ts_union good( { gated( "p", "u_0" ), gated( "q", "u_1" ) } );
    EXPECT_TRUE( check_join_preconditions( good ).ok() );

    // initial state has two outgoing arcs
    auto busy = ts_builder( "b" ).initial( "b0" ).both( "b0", "u_0", "b1" ).arc( "b0", "a", "b1" ).build();
    EXPECT_EQ( check_join_preconditions( ts_union( { busy } ) ).member_issues.size(), 1u );

    // the gate event reappears elsewhere
    auto reused = ts_builder( "r" ).initial( "r0" ).both( "r0", "u_0", "r1" ).arc( "r1", "u_0", "r2" ).build();
    EXPECT_EQ( check_join_preconditions( ts_union( { reused } ) ).member_issues.size(), 1u );

    // different events in and out
    auto split = ts_builder( "s" ).initial( "s0" ).arc( "s0", "u_0", "s1" ).arc( "s1", "g", "s0" ).build();
    EXPECT_EQ( check_join_preconditions( ts_union( { split } ) ).member_issues.size(), 1u );

    // an event occurring at every state
    auto loop = ts_builder( "l" )
                        .initial( "l0" )
                        .both( "l0", "u_0", "l1" )
                        .arc( "l1", "b", "l2" )
                        .arc( "l0", "a", "l0" )
                        .arc( "l1", "a", "l1" )
                        .arc( "l2", "a", "l2" )
                        .build();
    auto rep = check_join_preconditions( ts_union( { loop } ) );
    EXPECT_EQ( rep.ubiquitous_events, std::vector<std::string>{ "a" } );
}

TEST( JoinPreconditions, RandomUnionsSatisfyThem )
{
    std::mt19937 rng( 7 );
    for ( int k = 0; k < 20; ++k )
    {
        auto u = fixtures::random_joinable_union( rng, 3, 5, { "a", "b", "c" } );
        EXPECT_TRUE( check_join_preconditions( u ).ok() );
        EXPECT_TRUE( validate_ts( join( u ).ts ).ok() );
    }
}

TEST( JoinEquivalence, SmallRandomUnionsUnderSigmaOne )
{
    std::mt19937 rng( 11 );
    engine_config cfg;
    cfg.kind = engine_kind::propositional;
    for ( int k = 0; k < 5; ++k )
    {
        auto u = fixtures::random_joinable_union( rng, 2, 4, { "a", "b" } );
        auto j = join( u );
        const auto t = sigma1_type();
        EXPECT_EQ( check_ssp( u, t, cfg ).decision, check_ssp( j.ts, t, cfg ).decision );
        EXPECT_EQ( check_essp( u, t, cfg ).decision, check_essp( j.ts, t, cfg ).decision );
    }
}
