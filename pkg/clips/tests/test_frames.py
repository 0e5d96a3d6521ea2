import io

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from PIL import Image

from clips.exceptions import BitDepthError, EmptyForegroundError, MalformedFrameError
from clips.frames import RoiBox, crop_resize, decode_frame, encode_frame, normalize
from clips.roi import compute_roi


def png_bytes(array, mode=None):
    buffer = io.BytesIO()
    image = Image.fromarray(array) if mode is None else Image.fromarray(array).convert(mode)
    image.save(buffer, format='PNG')
    return buffer.getvalue()


def test_sixteen_bit_frame_round_trips_through_png(tmp_path):
    depth = np.random.default_rng(0).integers(0, 2 ** 16, size=(12, 9)).astype(np.uint16)
    encode_frame(depth, tmp_path / 'frame.png')
    decoded = decode_frame(tmp_path / 'frame.png')
    assert decoded.dtype == np.uint16
    assert_array_equal(decoded, depth)


def test_decode_accepts_bytes():
    depth = np.full((4, 4), 1234, dtype=np.uint16)
    assert_array_equal(decode_frame(png_bytes(depth)), depth)


@pytest.mark.parametrize('mode', ['L', 'RGB'])
def test_eight_bit_and_colour_frames_are_rejected(mode):
    with pytest.raises(BitDepthError):
        decode_frame(png_bytes(np.zeros((4, 4), dtype=np.uint8), mode))


def test_garbage_is_malformed(tmp_path):
    path = tmp_path / 'broken.png'
    path.write_bytes(b'not an image at all')
    with pytest.raises(MalformedFrameError):
        decode_frame(path)


def test_encode_rejects_stacks(tmp_path):
    with pytest.raises(BitDepthError):
        encode_frame(np.zeros((2, 4, 4), dtype=np.uint16), tmp_path / 'x.png')


def test_crop_resize_only_produces_input_values():
    frame = np.random.default_rng(1).integers(0, 5000, size=(90, 70)).astype(np.uint16)
    out = crop_resize(frame, RoiBox(top=10, left=5, bottom=50, right=45))
    assert out.shape == (64, 64)
    assert set(np.unique(out)) <= set(np.unique(frame[10:50, 5:45]))


def test_normalize_clamps_and_keeps_mask():
    assert_allclose(normalize(np.array([0, 2250, 4500, 9000])), [0.0, 0.5, 1.0, 1.0])
    assert normalize(np.array([3000]), max_depth_mm=6000)[0] == pytest.approx(0.5)


def test_roi_of_single_pixel():
    frame = np.zeros((100, 100), dtype=np.uint16)
    frame[10, 20] = 900
    assert compute_roi(frame) == RoiBox(top=9, left=19, bottom=12, right=22)


def test_roi_is_square_with_margin():
    frame = np.zeros((100, 100), dtype=np.uint16)
    frame[20:60, 30:50] = 1000
    roi = compute_roi(frame)
    assert roi == RoiBox(top=18, left=18, bottom=62, right=62)
    assert roi.height == roi.width == 44


def test_roi_is_clamped_to_the_frame():
    frame = np.zeros((100, 100), dtype=np.uint16)
    frame[0:10, :] = 1000
    assert compute_roi(frame) == RoiBox(top=0, left=0, bottom=100, right=100)


def test_roi_covers_every_frame_of_the_clip():
    frames = np.zeros((2, 80, 80), dtype=np.uint16)
    frames[0, 40, 10] = 1
    frames[1, 40, 50] = 1
    roi = compute_roi(frames)
    assert roi.left <= 10 and roi.right > 50
    assert roi.height == roi.width


def test_empty_foreground():
    with pytest.raises(EmptyForegroundError, match='empty foreground'):
        compute_roi(np.zeros((3, 10, 10), dtype=np.uint16))


def test_crop_resize_of_the_whole_input_is_identity():
    frame = np.random.default_rng(2).integers(0, 5000, size=(64, 64)).astype(np.uint16)
    assert_array_equal(crop_resize(frame, RoiBox(top=0, left=0, bottom=64, right=64)), frame)


def test_crop_resize_keeps_a_constant_depth():
    frame = np.full((120, 90), 2000, dtype=np.uint16)
    out = crop_resize(frame, RoiBox(top=7, left=3, bottom=100, right=80))
    assert np.all(out == 2000)
