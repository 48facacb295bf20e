//! Trajectory error metrics and the synthetic raycast scenes used as ground
//! truth.

mod metrics;
mod synth;

pub use metrics::{
    kitti_segment_errors, relative_pose_error, rpe_csv, summary_table, LengthErrors, PoseError,
    RpeReport, SegmentErrors, KITTI_SEGMENT_LENGTHS,
};
pub use synth::{
    box_room, camera_rotation, compact_lidar, corridor, make_scan_pair, raycast_scene,
    raycast_scene_stream, scene_by_name, street, synthetic_trajectory, to_depth_image, Patch,
    Raycast, ScanPair, SceneSpec, SensorModel, SyntheticScene, SCENE_NAMES,
};
