pub mod goofspiel;
pub mod kuhn;
pub mod leduc;
pub mod liars_dice;
