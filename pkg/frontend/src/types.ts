/** Payload shapes of the scheduling API. The client renders these verbatim;
 * it never derives counts, conflicts or solutions on its own. */

export type WishScope = 'morning' | 'afternoon' | 'whole_day';
export type WeekendStatus = 'work_weekend' | 'free_weekend' | 'weekday';

export interface CalendarDay {
  date: string;
  weekend_status: WeekendStatus;
  wish_count: number;
  own_wishes: { wish_id: string; scope: WishScope; status: string }[];
  conflict: boolean;
  band: 'none' | 'low' | 'high';
}

export interface CalendarData {
  month: string;
  phase: string;
  release_date: string;
  quota_remaining: number;
  wish_examples: string[];
  days: CalendarDay[];
}

export interface WishPayload {
  wish_id: string;
  worker_id: string;
  date: string;
  scope: WishScope;
  status: string;
  priority: boolean;
  origin: 'worker' | 'planner';
}

export interface ConflictSlot {
  date: string;
  shift: 'morning' | 'afternoon';
  staff_deficit: number;
  certified_deficit: number;
}

export interface ConflictWish {
  wish_id: string;
  worker_id: string;
  worker_name: string;
  date: string;
  scope: WishScope;
}

export interface ConflictPayload {
  conflict_id: string;
  month: string;
  slots: ConflictSlot[];
  colleagues: string[];
  wishes: ConflictWish[];
  solutions: string[][];
  truncated: boolean;
  escalation_required: boolean;
}

export interface ApiError {
  error: string;
  detail: string;
  quota?: number;
  remaining?: number;
  violations?: { kind: string; subject: string; detail: string }[];
}

export class RequestFailed extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiError,
  ) {
    super(`${body.error}: ${body.detail}`);
  }
}
