import assert from 'node:assert/strict';
import { test } from 'node:test';

import { WARNING_SIGN, buildCalendarViewModel, renderCalendar } from '../src/calendar.js';
import { findAll, renderToString } from '../src/vdom.js';
import { fixture } from './helpers.js';

const involved = fixture('calendar_involved').body;
const uninvolved = fixture('calendar_uninvolved').body;

test('every per-day count comes from the API response', () => {
  const vm = buildCalendarViewModel(involved);
  assert.equal(vm.cells.length, involved.days.length);
  for (let i = 0; i < vm.cells.length; i++) {
    assert.equal(vm.cells[i].wishCount, involved.days[i].wish_count);
    assert.equal(vm.cells[i].date, involved.days[i].date);
  }
});

test('the popular Friday shows its count and the involved caller a warning', () => {
  const vm = buildCalendarViewModel(involved);
  const friday = vm.cells.find((c) => c.date === '2019-06-14')!;
  assert.equal(friday.wishCount, 7);
  assert.equal(friday.ownWish, true);
  assert.equal(friday.conflict, true);

  const html = renderToString(renderCalendar(vm));
  assert.ok(html.includes(WARNING_SIGN), 'warning triangle rendered');
  assert.ok(html.includes('own-wish'), 'own wish marker rendered');
});

test('an uninvolved caller sees the same counts but no warning marker', () => {
  const vm = buildCalendarViewModel(uninvolved);
  const friday = vm.cells.find((c) => c.date === '2019-06-14')!;
  assert.equal(friday.wishCount, 7, 'counts are public');
  assert.equal(friday.ownWish, false);
  assert.equal(friday.conflict, false, 'conflict markers only on own conflicts');

  const html = renderToString(renderCalendar(vm));
  assert.ok(!html.includes(WARNING_SIGN));
});

test('warning cells match exactly the days the API flagged', () => {
  const vm = buildCalendarViewModel(involved);
  const tree = renderCalendar(vm);
  const flagged = findAll(tree, (n) => n.attrs['class']?.includes('conflict-warning'));
  const apiDays = involved.days.filter((d: any) => d.conflict).length;
  assert.equal(flagged.length, apiDays);
});

test('busy-day bands render from the API band field and can be switched off', () => {
  const vm = buildCalendarViewModel(involved);
  const on = renderToString(renderCalendar(vm));
  assert.ok(on.includes('band-high'));
  const off = renderToString(renderCalendar(vm, undefined, { showBands: false }));
  assert.ok(!off.includes('band-high'));
});

test('an empty month renders an empty grid without markers', () => {
  const empty = {
    ...involved,
    days: involved.days.map((d: any) => ({
      ...d,
      wish_count: 0,
      own_wishes: [],
      conflict: false,
      band: 'none',
    })),
  };
  const html = renderToString(renderCalendar(buildCalendarViewModel(empty)));
  assert.ok(!html.includes(WARNING_SIGN));
  assert.ok(!html.includes('own-wish'));
  assert.ok(!html.includes('band-'));
});
