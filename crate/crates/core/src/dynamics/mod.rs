//! Time dynamics of a conversation: time-point segmentation, per-segment
//! measure averages, trend lines, group comparison and measure correlation.

mod correlation;
mod groups;
mod segment;
mod series;
mod trend;

pub use correlation::{
    measure_correlation, pair_measure_columns, pearson, sample_pairs, sample_words, word_measure_columns,
    CorrelationMatrix, CorrelationStudy, DendroNode, Dendrogram, MIN_SAMPLE,
};
pub use groups::{
    compare_groups, rows_to_csv, CompareConfig, Comparison, Conversation, ConversationTags, GroupSummary, GroupingFile,
    IdeaSpan, Labels, Marker, Row, Scheme, Skipped, Span, UnitResult,
};
pub use segment::{segment, sentence_counts, Segment, SentenceCounts, MIN_CONVERSATION_NOUNS, MIN_SEGMENT_NOUNS};
pub use series::{segment_values, series, Column, SegmentSeries, SeriesPoint, Weighting};
pub use trend::{fit, fit_line, fit_trend, Classification, ColumnTrend, Trend, TrendReport, DEFAULT_EPSILON};
